// SPDX-License-Identifier: Apache-2.0

//! Bounded white-box test generation: argument tuples come from literals
//! harvested from the entry method, fake return values from a breadth-first
//! walk over choice-oracle scripts. A run is kept when it adds coverage.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::ast::*;
use crate::runtime::{
    ChoiceValue, EntryInfo, ExecConfig, ExecOutcome, Execution, Input, MethodCoverage, OracleScript, Runtime,
};
use crate::semantics::UnitSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplorationConfig {
    pub max_tests: usize,
    pub max_choice_depth: usize,
    /// Hard cap on interpreter runs per entry.
    pub max_runs: usize,
    pub time_budget: Duration,
    pub exec: ExecConfig,
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        Self {
            max_tests: 64,
            max_choice_depth: 8,
            max_runs: 20_000,
            time_budget: Duration::from_secs(10),
            exec: ExecConfig::default(),
        }
    }
}

/// Candidate values per primitive type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidates {
    pub ints: Vec<i64>,
    pub bools: Vec<bool>,
    pub strings: Vec<String>,
}

impl Candidates {
    /// A value outside `ints`, offered to integer choice points.
    pub fn fresh_int(&self) -> i64 {
        self.ints.iter().copied().max().unwrap_or(0).saturating_add(1)
    }

    pub fn choice_values(&self, ty: &TypeName) -> Vec<ChoiceValue> {
        match ty {
            TypeName::Bool => self.bools.iter().map(|b| ChoiceValue::Bool(*b)).collect(),
            TypeName::Int | TypeName::Long => {
                self.ints.iter().copied().chain(std::iter::once(self.fresh_int())).map(ChoiceValue::Int).collect()
            }
            TypeName::String => self.strings.iter().cloned().map(ChoiceValue::Str).collect(),
            _ => Vec::new(),
        }
    }
}

/// Integer literals compared against in `method`, widened to c-1, c, c+1,
/// after the defaults 0, 1, -1.
pub fn harvest_literals(method: &MethodDecl) -> Candidates {
    fn int_literal(e: &Expr) -> Option<i64> {
        match &e.kind {
            ExprKind::Literal(Literal::Int(v)) => Some(*v),
            ExprKind::Unary { op: UnaryOp::Neg, operand } => int_literal(operand).map(i64::wrapping_neg),
            _ => None,
        }
    }
    fn visit(e: &Expr, out: &mut BTreeSet<i64>) {
        match &e.kind {
            ExprKind::Binary { op, lhs, rhs } => {
                if op.is_comparison() {
                    for c in [int_literal(lhs), int_literal(rhs)].into_iter().flatten() {
                        out.extend([c.saturating_sub(1), c, c.saturating_add(1)]);
                    }
                }
                visit(lhs, out);
                visit(rhs, out);
            }
            ExprKind::Unary { operand, .. } => visit(operand, out),
            ExprKind::Member { receiver, .. } => visit(receiver, out),
            ExprKind::Call { callee, args, .. } => {
                visit(callee, out);
                args.iter().for_each(|a| visit(a, out));
            }
            ExprKind::New { args, .. } | ExprKind::Instantiate { args, .. } => {
                args.iter().for_each(|a| visit(a, out));
            }
            ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::This => {}
        }
    }
    fn block(b: &Block, out: &mut BTreeSet<i64>) {
        for s in &b.stmts {
            match &s.kind {
                StmtKind::If { cond, then_block, else_block } => {
                    visit(cond, out);
                    block(then_block, out);
                    if let Some(e) = else_block {
                        block(e, out);
                    }
                }
                StmtKind::Return(Some(e)) | StmtKind::Throw(e) | StmtKind::Expr(e) => visit(e, out),
                StmtKind::Local { init: Some(e), .. } => visit(e, out),
                StmtKind::Assign { target, value } => {
                    visit(target, out);
                    visit(value, out);
                }
                StmtKind::Return(None) | StmtKind::Local { init: None, .. } => {}
            }
        }
    }
    let mut harvested = BTreeSet::new();
    if let Some(b) = &method.body {
        block(b, &mut harvested);
    }
    let mut ints = vec![0, 1, -1];
    ints.extend(harvested.into_iter().filter(|v| ![0, 1, -1].contains(v)));
    Candidates { ints, bools: vec![true, false], strings: vec![String::new(), "x".to_string()] }
}

/// Inputs tried for one parameter.
pub fn param_candidates(ty: &TypeName, c: &Candidates, caller: &str, unit: &UnitSpec, rt: &Runtime) -> Vec<Input> {
    match ty {
        TypeName::Int | TypeName::Long => c.ints.iter().map(|v| Input::Int(*v)).collect(),
        TypeName::Bool => c.bools.iter().map(|b| Input::Bool(*b)).collect(),
        TypeName::String => c.strings.iter().map(|s| Input::Str(s.clone())).collect(),
        TypeName::Class(name) if unit.is_external_access(caller, name, rt.table()) && rt.table().class_exists(name) => {
            vec![Input::Null, Input::Uninit(name.clone())]
        }
        _ => vec![Input::Null],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedTest {
    pub entry: String,
    pub receiver_args: Vec<Input>,
    pub args: Vec<Input>,
    pub oracle_script: OracleScript,
    pub outcome: ExecOutcome,
    pub coverage: MethodCoverage,
    pub sc: f64,
    pub bc: f64,
}

/// Bound hits during exploration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Boundaries {
    pub choice_depth: usize,
    pub step_budget: usize,
    pub max_tests: bool,
    pub max_runs: bool,
    pub time_budget: bool,
}

impl Boundaries {
    pub fn total(&self) -> usize {
        self.choice_depth
            + self.step_budget
            + self.max_tests as usize
            + self.max_runs as usize
            + self.time_budget as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exploration {
    pub entry: String,
    pub tests: Vec<GeneratedTest>,
    pub coverage: MethodCoverage,
    pub sc: f64,
    pub bc: f64,
    pub runs: usize,
    pub boundaries: Boundaries,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("{0}")]
    Entry(#[from] crate::runtime::EntryError),
    #[error("no generated input reaches `{entry}` ({runs} runs)")]
    Infeasible { entry: String, runs: usize },
    #[error("`{0}` exceeds the exhaustive oracle bounds")]
    BoundsExceeded(String),
}

/// Argument tuples in odometer order (first position slowest).
pub fn tuples(columns: &[Vec<Input>]) -> impl Iterator<Item = Vec<Input>> + '_ {
    let total: usize = columns.iter().map(Vec::len).product();
    (0..total).map(move |mut n| {
        let mut out = vec![Input::Null; columns.len()];
        for (i, col) in columns.iter().enumerate().rev() {
            out[i] = col[n % col.len()].clone();
            n /= col.len();
        }
        out
    })
}

/// Candidate columns for an entry: constructor parameters, then method parameters.
pub fn input_columns(rt: &Runtime, entry: &EntryInfo, unit: &UnitSpec) -> (Vec<Vec<Input>>, Candidates) {
    let method = rt
        .program()
        .find_class(&entry.class)
        .and_then(|(_, c)| c.methods().find(|m| m.name == entry.method))
        .expect("entry resolved");
    let cands = harvest_literals(method);
    let mut cols = Vec::new();
    if !entry.is_static {
        for (_, t) in &entry.ctor_params {
            cols.push(param_candidates(t, &cands, &entry.class, unit, rt));
        }
    }
    for (_, t) in &entry.params {
        cols.push(param_candidates(t, &cands, &entry.class, unit, rt));
    }
    (cols, cands)
}

fn script_depth(s: &OracleScript) -> usize {
    s.values().map(Vec::len).sum()
}

fn extend(s: &OracleScript, label: &str, v: ChoiceValue) -> OracleScript {
    let mut s = s.clone();
    s.entry(label.to_string()).or_default().push(v);
    s
}

fn entry_coverage(rt: &Runtime, entry: &EntryInfo, ex: &Execution) -> MethodCoverage {
    ex.coverage
        .method(&entry.key)
        .cloned()
        .unwrap_or_else(|| rt.blank_coverage(&entry.key).expect("entry instrumented"))
}

fn is_full(c: &MethodCoverage) -> bool {
    c.entered && c.statements_hit.len() == c.statements_total && c.edges_hit.len() == c.branches_total
}

/// Greedy coverage-directed exploration of `entry`.
pub fn explore(
    rt: &Runtime,
    entry: &str,
    unit: &UnitSpec,
    config: &ExplorationConfig,
) -> Result<Exploration, ExploreError> {
    let info = rt.entry(entry)?;
    let (cols, cands) = input_columns(rt, &info, unit);
    let split = if info.is_static { 0 } else { info.ctor_params.len() };
    let start = Instant::now();
    let mut union = rt.blank_coverage(&info.key).expect("entry instrumented");
    let mut tests: Vec<GeneratedTest> = Vec::new();
    let mut bounds = Boundaries::default();
    let mut runs = 0usize;

    'tuples: for tuple in tuples(&cols) {
        let (recv, args) = tuple.split_at(split);
        let mut queue: VecDeque<OracleScript> = VecDeque::from([OracleScript::new()]);
        while let Some(script) = queue.pop_front() {
            if runs >= config.max_runs {
                bounds.max_runs = true;
                break 'tuples;
            }
            if start.elapsed() > config.time_budget {
                bounds.time_budget = true;
                break 'tuples;
            }
            runs += 1;
            let ex = rt.execute(&info, recv, args, &script, &config.exec);
            match &ex.outcome {
                ExecOutcome::ChoiceExhausted { label, value_type } => {
                    if script_depth(&script) >= config.max_choice_depth {
                        bounds.choice_depth += 1;
                        continue;
                    }
                    let children = cands.choice_values(value_type);
                    if *value_type == TypeName::Bool {
                        for v in children.into_iter().rev() {
                            queue.push_front(extend(&script, label, v));
                        }
                    } else {
                        queue.extend(children.into_iter().map(|v| extend(&script, label, v)));
                    }
                }
                ExecOutcome::StepBudgetExceeded => bounds.step_budget += 1,
                _ => {
                    let cov = entry_coverage(rt, &info, &ex);
                    if union.adds(&cov) {
                        if tests.len() >= config.max_tests {
                            bounds.max_tests = true;
                            break 'tuples;
                        }
                        union.merge(&cov);
                        let (sc, bc) = cov.percentages();
                        tests.push(GeneratedTest {
                            entry: info.key.clone(),
                            receiver_args: recv.to_vec(),
                            args: args.to_vec(),
                            oracle_script: script,
                            outcome: ex.outcome,
                            coverage: cov,
                            sc,
                            bc,
                        });
                        if is_full(&union) {
                            break 'tuples;
                        }
                    }
                }
            }
        }
    }

    if !union.entered {
        return Err(ExploreError::Infeasible { entry: info.key, runs });
    }
    minimize(&mut tests);
    let (sc, bc) = union.percentages();
    Ok(Exploration { entry: info.key, tests, coverage: union, sc, bc, runs, boundaries: bounds })
}

/// Drops tests whose coverage is contained in the union of the others.
pub fn minimize(tests: &mut Vec<GeneratedTest>) {
    let mut i = 0;
    while i < tests.len() {
        let mut others = MethodCoverage::default();
        for (j, t) in tests.iter().enumerate() {
            if j != i {
                others.merge(&t.coverage);
            }
        }
        if others.adds(&tests[i].coverage) {
            i += 1;
        } else {
            tests.remove(i);
            i = 0;
        }
    }
}

/// Re-executes a generated test.
pub fn replay(
    rt: &Runtime,
    test: &GeneratedTest,
    exec: &ExecConfig,
) -> Result<(ExecOutcome, MethodCoverage), ExploreError> {
    let info = rt.entry(&test.entry)?;
    let ex = rt.execute(&info, &test.receiver_args, &test.args, &test.oracle_script, exec);
    let cov = entry_coverage(rt, &info, &ex);
    Ok((ex.outcome, cov))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_params: usize,
    pub max_choice_depth: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self { max_params: 4, max_choice_depth: 6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub outcomes: BTreeSet<ExecOutcome>,
    pub coverage: MethodCoverage,
    pub sc: f64,
    pub bc: f64,
    pub runs: usize,
}

/// Exhaustive enumeration of every candidate tuple and every choice sequence.
pub fn brute_force_oracle(
    rt: &Runtime,
    entry: &str,
    unit: &UnitSpec,
    bounds: &OracleBounds,
    exec: &ExecConfig,
) -> Result<OracleResult, ExploreError> {
    let info = rt.entry(entry)?;
    let (cols, cands) = input_columns(rt, &info, unit);
    if cols.len() > bounds.max_params {
        return Err(ExploreError::BoundsExceeded(info.key));
    }
    let split = if info.is_static { 0 } else { info.ctor_params.len() };
    let mut acc = OracleResult {
        outcomes: BTreeSet::new(),
        coverage: rt.blank_coverage(&info.key).expect("entry instrumented"),
        sc: 0.0,
        bc: 0.0,
        runs: 0,
    };

    struct Search<'a, 'p> {
        rt: &'a Runtime<'p>,
        info: &'a EntryInfo,
        cands: &'a Candidates,
        bounds: &'a OracleBounds,
        exec: &'a ExecConfig,
    }

    impl Search<'_, '_> {
        fn dfs(
            &self,
            recv: &[Input],
            args: &[Input],
            script: OracleScript,
            depth: usize,
            acc: &mut OracleResult,
        ) -> Result<(), ExploreError> {
            acc.runs += 1;
            let ex = self.rt.execute(self.info, recv, args, &script, self.exec);
            if let ExecOutcome::ChoiceExhausted { label, value_type } = &ex.outcome {
                if depth >= self.bounds.max_choice_depth {
                    return Err(ExploreError::BoundsExceeded(self.info.key.clone()));
                }
                for v in self.cands.choice_values(value_type) {
                    let mut next = script.clone();
                    next.entry(label.clone()).or_default().push(v);
                    self.dfs(recv, args, next, depth + 1, acc)?;
                }
                return Ok(());
            }
            if ex.outcome != ExecOutcome::StepBudgetExceeded {
                if let Some(c) = ex.coverage.method(&self.info.key) {
                    acc.coverage.merge(c);
                }
                acc.outcomes.insert(ex.outcome);
            }
            Ok(())
        }
    }

    let search = Search { rt, info: &info, cands: &cands, bounds, exec };
    for tuple in tuples(&cols) {
        let (recv, args) = tuple.split_at(split);
        search.dfs(recv, args, OracleScript::new(), 0, &mut acc)?;
    }
    let (sc, bc) = acc.coverage.percentages();
    acc.sc = sc;
    acc.bc = bc;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse, SourceFile};

    fn method(src: &str) -> MethodDecl {
        let t = parse(&SourceFile::new("t.ul", src)).unwrap();
        let m = t.classes[0].methods().next().unwrap().clone();
        m
    }

    #[test]
    fn harvest_neighbourhoods() {
        let c = harvest_literals(&method("class A { int f(long amount) { if (amount <= 0) return 1; return 2; } }"));
        assert_eq!(c.ints, vec![0, 1, -1]);
        let c = harvest_literals(&method("class A { int f(int x) { return 7; } }"));
        assert_eq!(c.ints, vec![0, 1, -1]);
        let c = harvest_literals(&method("class A { bool f(int x) { return x == 861 || -5 > x; } }"));
        assert_eq!(c.ints, vec![0, 1, -1, -6, -5, -4, 860, 861, 862]);
        assert_eq!(c.fresh_int(), 863);
    }

    #[test]
    fn odometer_order() {
        let cols = vec![vec![Input::Int(0), Input::Int(1)], vec![Input::Null, Input::Bool(true)]];
        let all: Vec<Vec<Input>> = tuples(&cols).collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[1], vec![Input::Int(0), Input::Bool(true)]);
        assert_eq!(all[2], vec![Input::Int(1), Input::Null]);
        assert_eq!(tuples(&[]).count(), 1);
    }
}
