// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use common::{corpus, corpus_projects, inline};
use isoforge::pipeline::isolate;
use isoforge::runtime::*;
use isoforge::testgen::*;

const TRANSFER: &str = "Bank.TransferMoney";

fn outcomes(e: &Exploration) -> BTreeSet<ExecOutcome> {
    e.tests.iter().map(|t| t.outcome.clone()).collect()
}

fn threw(m: &str) -> ExecOutcome {
    ExecOutcome::Threw { message: m.into() }
}

fn permissive() -> ExplorationConfig {
    ExplorationConfig {
        exec: ExecConfig { env: EnvMode::Permissive, ..ExecConfig::default() },
        ..ExplorationConfig::default()
    }
}

#[test]
fn transfer_plain_arm() {
    let p = corpus("transfer");
    let rt = Runtime::new(&p.program, &p.table);
    let e = explore(&rt, TRANSFER, &p.unit, &ExplorationConfig::default()).unwrap();
    assert_eq!(e.tests.len(), 2);
    let kinds: BTreeSet<_> = e.tests.iter().map(|t| t.outcome.kind()).collect();
    assert_eq!(kinds, BTreeSet::from(["EnvFault", "Threw"]));
    assert!(e.sc < 50.0);
    assert_eq!(e.sc, 30.0);
}

#[test]
fn transfer_permissive_arm() {
    let p = corpus("transfer");
    let rt = Runtime::new(&p.program, &p.table);
    let e = explore(&rt, TRANSFER, &p.unit, &permissive()).unwrap();
    assert_eq!(outcomes(&e), BTreeSet::from([threw("Invalid amount to transfer"), threw("Not enough balance")]));
    assert_eq!(e.sc, 50.0);
}

#[test]
fn transfer_isolated_arm() {
    let p = corpus("transfer");
    let iso = isolate(&p.program, &p.table, &p.unit);
    let rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
    let e = explore(&rt, TRANSFER, &p.unit, &ExplorationConfig::default()).unwrap();
    assert_eq!(e.tests.len(), 4);
    assert_eq!(
        outcomes(&e),
        BTreeSet::from([
            threw("Invalid amount to transfer"),
            threw("Not enough balance"),
            ExecOutcome::Returned { value: Value::Bool(true) },
            ExecOutcome::Returned { value: Value::Bool(false) },
        ])
    );
    assert_eq!((e.sc, e.bc), (100.0, 100.0));

    let o = brute_force_oracle(&rt, TRANSFER, &p.unit, &OracleBounds::default(), &ExecConfig::default()).unwrap();
    assert_eq!((o.sc, o.bc), (100.0, 100.0));
}

#[test]
fn plain_transfer_matches_oracle() {
    let p = corpus("transfer");
    let rt = Runtime::new(&p.program, &p.table);
    let e = explore(&rt, TRANSFER, &p.unit, &ExplorationConfig::default()).unwrap();
    let o = brute_force_oracle(&rt, TRANSFER, &p.unit, &OracleBounds::default(), &ExecConfig::default()).unwrap();
    assert_eq!((e.sc, e.bc), (o.sc, o.bc));
}

#[test]
fn branchless_method_needs_one_test() {
    let p = inline("class T { static int f(int x) { return x; } }", false);
    let rt = Runtime::new(&p.program, &p.table);
    let e = explore(&rt, "T.f", &p.unit, &ExplorationConfig::default()).unwrap();
    assert_eq!(e.tests.len(), 1);
    assert_eq!((e.sc, e.bc), (100.0, 100.0));
}

#[test]
fn oracle_expands_bool_choices() {
    let p = inline("class T { static int f() { if (Env.chooseBool(\"c\")) return 1; return 2; } }", true);
    let rt = Runtime::new(&p.program, &p.table);
    let o = brute_force_oracle(&rt, "T.f", &p.unit, &OracleBounds::default(), &ExecConfig::default()).unwrap();
    let expected: BTreeSet<_> = [1, 2].into_iter().map(|i| ExecOutcome::Returned { value: Value::Int(i) }).collect();
    assert_eq!(o.outcomes, expected);
}

#[test]
fn oracle_rejects_large_methods() {
    let p = inline("class T { static int f(int a, int b, int c, int d, int e) { return a; } }", false);
    let rt = Runtime::new(&p.program, &p.table);
    let r = brute_force_oracle(&rt, "T.f", &p.unit, &OracleBounds::default(), &ExecConfig::default());
    assert!(matches!(r, Err(ExploreError::BoundsExceeded(_))));
}

#[test]
fn unconstructible_receiver_is_infeasible() {
    let p = corpus("order_service");
    let rt = Runtime::new(&p.program, &p.table);
    let r = explore(&rt, "OrderService.PlaceOrder", &p.unit, &ExplorationConfig::default());
    assert!(matches!(r, Err(ExploreError::Infeasible { .. })), "{r:?}");
}

#[test]
fn int_choices_use_harvested_neighbours() {
    let p = corpus("payment_chain");
    let iso = isolate(&p.program, &p.table, &p.unit);
    let rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
    let e = explore(&rt, "Checkout.Pay", &p.unit, &ExplorationConfig::default()).unwrap();
    assert!(e.tests.iter().any(|t| t.outcome == ExecOutcome::Returned { value: Value::Int(2) }));
    let scripted: Vec<_> = e.tests.iter().flat_map(|t| t.oracle_script.values().flatten()).collect();
    assert!(scripted.contains(&&ChoiceValue::Int(861)));
}

/// Every kept test, on every corpus entry and both arms.
fn all_explorations(cfg: &ExplorationConfig) -> Vec<(bool, Exploration)> {
    let mut out = Vec::new();
    for p in corpus_projects() {
        let iso = isolate(&p.program, &p.table, &p.unit);
        let plain_rt = Runtime::new(&p.program, &p.table);
        let iso_rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
        for entry in &p.entries {
            if let Ok(e) = explore(&plain_rt, entry, &p.unit, cfg) {
                out.push((false, e));
            }
            if let Ok(e) = explore(&iso_rt, entry, &p.unit, cfg) {
                out.push((true, e));
            }
        }
    }
    out
}

fn union(tests: &[&GeneratedTest]) -> (usize, usize) {
    let mut cov = tests[0].coverage.clone();
    for t in &tests[1..] {
        cov.merge(&t.coverage);
    }
    (cov.statements_hit.len(), cov.edges_hit.len())
}

#[test]
fn suites_are_minimal() {
    for (_, e) in all_explorations(&ExplorationConfig::default()) {
        let all: Vec<&GeneratedTest> = e.tests.iter().collect();
        let full = union(&all);
        for i in 0..all.len() {
            let rest: Vec<_> = all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, t)| *t).collect();
            if rest.is_empty() {
                continue;
            }
            let (s, b) = union(&rest);
            assert!(s < full.0 || b < full.1, "{}: test {i} is redundant", e.entry);
        }
    }
}

#[test]
fn suites_respect_budgets() {
    let cfg = ExplorationConfig { max_tests: 2, max_choice_depth: 1, ..ExplorationConfig::default() };
    for (_, e) in all_explorations(&cfg) {
        assert!(e.tests.len() <= 2, "{}", e.entry);
        for t in &e.tests {
            let depth: usize = t.oracle_script.values().map(Vec::len).sum();
            assert!(depth <= 1, "{}: depth {depth}", e.entry);
        }
    }
}

#[test]
fn tight_choice_depth_is_a_boundary_event() {
    let p = corpus("transfer");
    let iso = isolate(&p.program, &p.table, &p.unit);
    let rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
    let cfg = ExplorationConfig { max_choice_depth: 1, ..ExplorationConfig::default() };
    let e = explore(&rt, TRANSFER, &p.unit, &cfg).unwrap();
    assert!(e.boundaries.choice_depth > 0);
    assert!(e.sc < 100.0);
}

#[test]
fn exploration_is_deterministic() {
    let a = all_explorations(&ExplorationConfig::default());
    let b = all_explorations(&ExplorationConfig::default());
    let strip = |v: Vec<(bool, Exploration)>| v.into_iter().map(|(i, e)| (i, e.entry, e.tests)).collect::<Vec<_>>();
    assert_eq!(strip(a), strip(b));
}
