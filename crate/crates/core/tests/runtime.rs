// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use isoforge::fakegen::basic_environment_source;
use isoforge::frontend::SourceFile;
use isoforge::pipeline::{isolate, LoadedProject, Manifest, Project};
use isoforge::runtime::*;

fn transfer() -> LoadedProject {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/transfer");
    Project::read(&dir, None).unwrap().load().unwrap()
}

fn script(pairs: &[(&str, Vec<ChoiceValue>)]) -> OracleScript {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

const ENTRY: &str = "Bank.TransferMoney";

#[test]
fn plain_runs_match_the_unisolated_table() {
    let p = transfer();
    let rt = Runtime::new(&p.program, &p.table);
    let e = rt.entry(ENTRY).unwrap();
    let cfg = ExecConfig::default();

    let r = rt.execute(&e, &[], &[Input::Null, Input::Int(0), Input::Null], &OracleScript::new(), &cfg);
    assert_eq!(r.outcome, ExecOutcome::Threw { message: "Invalid amount to transfer".into() });

    let r = rt.execute(&e, &[], &[Input::Null, Input::Int(1), Input::Null], &OracleScript::new(), &cfg);
    assert_eq!(r.outcome, ExecOutcome::EnvFault { primitive: EnvPrimitive::DbQuery });
    assert_eq!(r.side_effects.len(), 1);
    let cov = r.coverage.method(ENTRY).unwrap();
    // the guard and the balance declaration
    assert_eq!(cov.statements_hit.len(), 2);
    assert_eq!(cov.statements_total, 10);
    assert_eq!(cov.branches_total, 6);
}

#[test]
fn permissive_mode_returns_defaults() {
    let p = transfer();
    let rt = Runtime::new(&p.program, &p.table);
    let e = rt.entry(ENTRY).unwrap();
    let cfg = ExecConfig { env: EnvMode::Permissive, ..ExecConfig::default() };
    let r = rt.execute(&e, &[], &[Input::Null, Input::Int(1), Input::Null], &OracleScript::new(), &cfg);
    assert_eq!(r.outcome, ExecOutcome::Threw { message: "Not enough balance".into() });
    assert_eq!(r.side_effects[0].primitive, EnvPrimitive::DbQuery);
}

#[test]
fn isolated_run_follows_scripted_choices() {
    let p = transfer();
    let iso = isolate(&p.program, &p.table, &p.unit);
    assert!(iso.is_success(), "{:?}", iso.diagnostics());
    let (program, table) = (iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
    let rt = Runtime::new(program, table);
    let e = rt.entry(ENTRY).unwrap();
    let labels: Vec<String> = iso.artifact.as_ref().unwrap().choice_labels.iter().map(|l| l.label.clone()).collect();
    assert_eq!(labels, vec!["RunQueryStringTokenInt32_0.ret", "MemberProcessedTransferIsSuccessBoolean_2.ret"]);

    let s = script(&[(&labels[0], vec![ChoiceValue::Int(862)]), (&labels[1], vec![ChoiceValue::Bool(true)])]);
    let r = rt.execute(&e, &[], &[Input::Null, Input::Int(861), Input::Null], &s, &ExecConfig::default());
    assert_eq!(r.outcome, ExecOutcome::Returned { value: Value::Bool(true) });
    assert!(r.side_effects.is_empty());
    assert_eq!(r.oracle_log.len(), 2);
    // `tp` and `pt` are both uninitialized; `tp` keeps its constructor argument
    assert_eq!(r.uninitialized.len(), 2);
    assert_eq!(r.uninitialized[0].class, "TransferProcessor");
    assert_eq!(r.uninitialized[0].ctor_args, vec![Value::Null]);
    assert_eq!(r.isolated_receivers.len(), 2);

    let s = script(&[(&labels[0], vec![ChoiceValue::Int(860)])]);
    let r = rt.execute(&e, &[], &[Input::Null, Input::Int(861), Input::Null], &s, &ExecConfig::default());
    assert_eq!(r.outcome, ExecOutcome::Threw { message: "Not enough balance".into() });

    let r =
        rt.execute(&e, &[], &[Input::Null, Input::Int(861), Input::Null], &OracleScript::new(), &ExecConfig::default());
    assert!(matches!(r.outcome, ExecOutcome::ChoiceExhausted { ref label, .. } if *label == labels[0]));
}

fn inline(src: &str) -> LoadedProject {
    load(vec![SourceFile::new("t.ul", src)])
}

/// Declares the environment and an empty `Fake` so the intrinsics resolve.
fn with_env(src: &str) -> LoadedProject {
    load(vec![
        SourceFile::new("t.ul", src),
        SourceFile::new("Fake.ul", "class Fake { }"),
        SourceFile::new("Env.ul", basic_environment_source()),
    ])
}

fn load(files: Vec<SourceFile>) -> LoadedProject {
    let project = Project {
        name: "inline".into(),
        files,
        manifest: Manifest { unit: vec!["T".into()], entry_methods: Vec::new() },
    };
    project.load().unwrap()
}

fn run(p: &LoadedProject, entry: &str, args: &[Input]) -> Execution {
    let rt = Runtime::new(&p.program, &p.table);
    let e = rt.entry(entry).unwrap();
    rt.execute(&e, &[], args, &OracleScript::new(), &ExecConfig::default())
}

#[test]
fn straight_line_method_is_fully_covered() {
    let p = inline("class T { static int f(int x) { int y = x * 2; y = y + 1; return y; } }");
    let r = run(&p, "T.f", &[Input::Int(4)]);
    assert_eq!(r.outcome, ExecOutcome::Returned { value: Value::Int(9) });
    assert_eq!(r.coverage.coverage("T.f").unwrap(), (100.0, 100.0));
}

#[test]
fn each_instantiation_is_a_distinct_object() {
    let p =
        with_env("class X { } class T { static bool f() { X a = New<X>.get(); X b = New<X>.get(); return a == b; } }");
    let r = run(&p, "T.f", &[]);
    assert_eq!(r.outcome, ExecOutcome::Returned { value: Value::Bool(false) });
    assert_eq!(r.uninitialized.len(), 2);
}

#[test]
fn uninitialized_instance_equals_itself() {
    let p = with_env("class X { } class T { static bool f() { X a = New<X>.get(); X b = a; return a == b; } }");
    let r = run(&p, "T.f", &[]);
    assert_eq!(r.outcome, ExecOutcome::Returned { value: Value::Bool(true) });
}

#[test]
fn isolator_always_yields_the_same_fake() {
    let p = with_env(
        "class X { } \
         class T { static bool f() { X a = New<X>.get(); X b = New<X>.get(); Fake f = a._(); Fake g = b._(); return f == g; } }",
    );
    let r = run(&p, "T.f", &[]);
    assert_eq!(r.outcome, ExecOutcome::Returned { value: Value::Bool(true) });
    assert_eq!(r.isolated_receivers.len(), 2);
}

#[test]
fn dispatch_on_uninitialized_instance_faults() {
    let p =
        with_env("class X { int g() { return 1; } } class T { static int f() { X a = New<X>.get(); return a.g(); } }");
    let r = run(&p, "T.f", &[]);
    assert!(matches!(r.outcome, ExecOutcome::RuntimeFault { .. }), "{}", r.outcome);
    let r = run(&p, "T.f", &[]);
    assert!(r.side_effects.is_empty());
}

#[test]
fn uninit_input_cannot_be_dispatched_on() {
    let p = inline("class X { int g() { return 1; } } class T { static int f(X x) { return x.g(); } }");
    let r = run(&p, "T.f", &[Input::Uninit("X".into())]);
    assert!(matches!(r.outcome, ExecOutcome::RuntimeFault { .. }));
    let r = run(&p, "T.f", &[Input::Null]);
    assert!(matches!(r.outcome, ExecOutcome::RuntimeFault { .. }));
}

#[test]
fn step_budget_is_reported() {
    let p = inline("class T { static int f(int n) { return f(n + 1); } }");
    let rt = Runtime::new(&p.program, &p.table);
    let e = rt.entry("T.f").unwrap();
    let cfg = ExecConfig { budget: 50, ..ExecConfig::default() };
    let r = rt.execute(&e, &[], &[Input::Int(0)], &OracleScript::new(), &cfg);
    assert_eq!(r.outcome, ExecOutcome::StepBudgetExceeded);
}
