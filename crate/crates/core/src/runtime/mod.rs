// SPDX-License-Identifier: Apache-2.0

//! Tree-walking interpreter with statement/branch coverage, simulated
//! environment primitives, uninitialized objects and a choice oracle.

mod coverage;
mod interp;
mod oracle;
mod value;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::ast::*;
use crate::frontend::Program;
use crate::semantics::SymbolTable;

pub use coverage::{CoverageMap, MethodCoverage, UnknownMethod};
pub use oracle::{ChoiceOracle, OracleScript};
pub use value::{ChoiceValue, Input, ObjId, Value};

pub const DEFAULT_STEP_BUDGET: u64 = 100_000;
pub const DEFAULT_MAX_DEPTH: usize = 128;

/// Simulated environment primitives reachable through the `Sys` prelude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EnvPrimitive {
    #[serde(rename = "db.query")]
    DbQuery,
    #[serde(rename = "net.send")]
    NetSend,
    #[serde(rename = "fs.read")]
    FsRead,
}

impl EnvPrimitive {
    pub fn name(self) -> &'static str {
        match self {
            EnvPrimitive::DbQuery => "db.query",
            EnvPrimitive::NetSend => "net.send",
            EnvPrimitive::FsRead => "fs.read",
        }
    }

    pub fn from_native(class: &str, method: &str) -> Option<Self> {
        match (class, method) {
            ("Sys", "dbQuery") => Some(EnvPrimitive::DbQuery),
            ("Sys", "netSend") => Some(EnvPrimitive::NetSend),
            ("Sys", "fsRead") => Some(EnvPrimitive::FsRead),
            _ => None,
        }
    }

    /// Value returned in permissive mode.
    pub fn default_value(self) -> Value {
        match self {
            EnvPrimitive::DbQuery => Value::Int(0),
            EnvPrimitive::NetSend => Value::Bool(true),
            EnvPrimitive::FsRead => Value::Str(String::new()),
        }
    }
}

impl fmt::Display for EnvPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvMode {
    /// Every primitive fails.
    #[default]
    Hostile,
    /// Primitives return fixed defaults.
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideEffect {
    pub primitive: EnvPrimitive,
    pub args: Vec<Value>,
}

/// How one execution ended.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ExecOutcome {
    Returned { value: Value },
    Threw { message: String },
    EnvFault { primitive: EnvPrimitive },
    RuntimeFault { message: String },
    ChoiceExhausted { label: String, value_type: TypeName },
    StepBudgetExceeded,
}

impl ExecOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            ExecOutcome::Returned { .. } => "Returned",
            ExecOutcome::Threw { .. } => "Threw",
            ExecOutcome::EnvFault { .. } => "EnvFault",
            ExecOutcome::RuntimeFault { .. } => "RuntimeFault",
            ExecOutcome::ChoiceExhausted { .. } => "ChoiceExhausted",
            ExecOutcome::StepBudgetExceeded => "StepBudgetExceeded",
        }
    }
}

impl fmt::Display for ExecOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecOutcome::Returned { value } => write!(f, "Returned({value})"),
            ExecOutcome::Threw { message } => write!(f, "Threw({message:?})"),
            ExecOutcome::EnvFault { primitive } => write!(f, "EnvFault({primitive})"),
            ExecOutcome::RuntimeFault { message } => write!(f, "RuntimeFault({message})"),
            ExecOutcome::ChoiceExhausted { label, .. } => write!(f, "ChoiceExhausted({label})"),
            ExecOutcome::StepBudgetExceeded => f.write_str("StepBudgetExceeded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecConfig {
    pub budget: u64,
    pub max_depth: usize,
    pub env: EnvMode,
}

impl Default for ExecConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_STEP_BUDGET, max_depth: DEFAULT_MAX_DEPTH, env: EnvMode::Hostile }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub outcome: ExecOutcome,
    pub coverage: CoverageMap,
    pub side_effects: Vec<SideEffect>,
    pub oracle_log: Vec<(String, ChoiceValue)>,
    /// Receivers passed through the isolator, in call order.
    pub isolated_receivers: Vec<Value>,
    /// Objects allocated without running a constructor.
    pub uninitialized: Vec<Allocation>,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub id: ObjId,
    pub class: String,
    pub ctor_args: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntryError {
    #[error("entry `{0}` is not of the form `Class.method`")]
    Malformed(String),
    #[error("unknown entry method `{0}`")]
    Unknown(String),
    #[error("entry `{0}` has no body")]
    NoBody(String),
}

/// Signature data needed to call an entry method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryInfo {
    pub key: String,
    pub class: String,
    pub method: String,
    pub is_static: bool,
    pub params: Vec<(String, TypeName)>,
    /// Constructor parameters of the receiver class, for instance entries.
    pub ctor_params: Vec<(String, TypeName)>,
    pub return_type: TypeName,
}

struct ClassRt<'p> {
    decl: &'p ClassDecl,
    file: usize,
    supertype: Option<&'p str>,
    methods: HashMap<&'p str, &'p MethodDecl>,
}

/// Per-method instrumentation totals.
#[derive(Debug, Clone)]
struct MethodIndex {
    key: String,
    statements: usize,
    ifs: usize,
}

/// A program prepared for repeated execution.
pub struct Runtime<'p> {
    program: &'p Program,
    table: &'p SymbolTable,
    classes: HashMap<&'p str, ClassRt<'p>>,
    /// Keyed by (file, id of the method or constructor declaration).
    method_index: HashMap<(usize, NodeId), usize>,
    methods: Vec<MethodIndex>,
    by_key: HashMap<String, usize>,
}

impl<'p> Runtime<'p> {
    pub fn new(program: &'p Program, table: &'p SymbolTable) -> Self {
        let mut rt = Runtime {
            program,
            table,
            classes: HashMap::new(),
            method_index: HashMap::new(),
            methods: Vec::new(),
            by_key: HashMap::new(),
        };
        for (file, tree) in program.trees.iter().enumerate() {
            for class in &tree.classes {
                let mut methods = HashMap::new();
                for member in &class.members {
                    let (id, key, body) = match member {
                        Member::Method(m) => {
                            methods.insert(m.name.as_str(), m);
                            (m.id, format!("{}.{}", class.name, m.name), m.body.as_ref())
                        }
                        Member::Ctor(c) => (c.id, format!("{}.<ctor>", class.name), Some(&c.body)),
                        Member::Field(_) => continue,
                    };
                    let Some(body) = body else { continue };
                    let (statements, ifs) = count_statements(body);
                    rt.method_index.insert((file, id), rt.methods.len());
                    rt.by_key.insert(key.clone(), rt.methods.len());
                    rt.methods.push(MethodIndex { key, statements, ifs });
                }
                rt.classes.insert(
                    class.name.as_str(),
                    ClassRt {
                        decl: class,
                        file,
                        supertype: class.supertype.as_ref().map(|s| type_class(&s.name)),
                        methods,
                    },
                );
            }
        }
        rt
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    pub fn table(&self) -> &'p SymbolTable {
        self.table
    }

    /// Empty coverage record for an instrumented method.
    pub fn blank_coverage(&self, key: &str) -> Result<MethodCoverage, UnknownMethod> {
        let i = *self.by_key.get(key).ok_or_else(|| UnknownMethod(key.to_string()))?;
        Ok(MethodCoverage::empty(self.methods[i].statements, self.methods[i].ifs))
    }

    /// Coverage percentages of `key` in `map`; (0, 0) when never entered.
    pub fn coverage(&self, map: &CoverageMap, key: &str) -> Result<(f64, f64), UnknownMethod> {
        match map.method(key) {
            Some(m) => Ok(m.percentages()),
            None => self.blank_coverage(key).map(|m| m.percentages()),
        }
    }

    pub fn entry(&self, qualified: &str) -> Result<EntryInfo, EntryError> {
        let (class, method) = qualified.rsplit_once('.').ok_or_else(|| EntryError::Malformed(qualified.to_string()))?;
        let c = self.classes.get(class).ok_or_else(|| EntryError::Unknown(qualified.to_string()))?;
        let m = c.methods.get(method).ok_or_else(|| EntryError::Unknown(qualified.to_string()))?;
        if m.body.is_none() {
            return Err(EntryError::NoBody(qualified.to_string()));
        }
        let ctor_params = c
            .decl
            .ctor()
            .map(|ct| ct.params.iter().map(|p| (p.name.clone(), p.ty.name.clone())).collect())
            .unwrap_or_default();
        Ok(EntryInfo {
            key: format!("{class}.{method}"),
            class: class.to_string(),
            method: method.to_string(),
            is_static: m.is_static,
            params: m.params.iter().map(|p| (p.name.clone(), p.ty.name.clone())).collect(),
            ctor_params,
            return_type: m.ret.name.clone(),
        })
    }

    /// Runs `entry`. Instance entries first build their receiver with the real
    /// constructor applied to `receiver_args`.
    pub fn execute(
        &self,
        entry: &EntryInfo,
        receiver_args: &[Input],
        args: &[Input],
        script: &OracleScript,
        config: &ExecConfig,
    ) -> Execution {
        let mut oracle = ChoiceOracle::new(script);
        let mut m = interp::Machine::new(self, &mut oracle, *config);
        let outcome = m.run_entry(entry, receiver_args, args);
        let (coverage, side_effects, isolated_receivers, uninitialized, steps) = m.finish();
        Execution {
            outcome,
            coverage,
            side_effects,
            oracle_log: oracle.log().to_vec(),
            isolated_receivers,
            uninitialized,
            steps,
        }
    }
}

/// One-shot execution of `entry` (`Class.method`).
pub fn execute(
    program: &Program,
    table: &SymbolTable,
    entry: &str,
    receiver_args: &[Input],
    args: &[Input],
    script: &OracleScript,
    config: &ExecConfig,
) -> Result<Execution, EntryError> {
    let rt = Runtime::new(program, table);
    let info = rt.entry(entry)?;
    Ok(rt.execute(&info, receiver_args, args, script, config))
}

/// Result of an environment primitive call in the given mode.
pub fn simulate_environment(primitive: EnvPrimitive, mode: EnvMode) -> Result<Value, ExecOutcome> {
    match mode {
        EnvMode::Hostile => Err(ExecOutcome::EnvFault { primitive }),
        EnvMode::Permissive => Ok(primitive.default_value()),
    }
}

fn type_class(t: &TypeName) -> &str {
    match t {
        TypeName::Class(c) => c,
        _ => "object",
    }
}

/// Number of statements and `if` statements in a body.
pub fn count_statements(block: &Block) -> (usize, usize) {
    let mut stmts = 0;
    let mut ifs = 0;
    fn walk(b: &Block, stmts: &mut usize, ifs: &mut usize) {
        for s in &b.stmts {
            *stmts += 1;
            if let StmtKind::If { then_block, else_block, .. } = &s.kind {
                *ifs += 1;
                walk(then_block, stmts, ifs);
                if let Some(e) = else_block {
                    walk(e, stmts, ifs);
                }
            }
        }
    }
    walk(block, &mut stmts, &mut ifs);
    (stmts, ifs)
}
