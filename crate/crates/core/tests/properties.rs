// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use isoforge::frontend::ast::TypeName;
use isoforge::frontend::{parse, pretty_print, SourceFile};
use isoforge::pipeline::isolate;
use isoforge::runtime::MethodCoverage;
use isoforge::semantics::{collect_external_accesses, resolve};
use isoforge::transform::{mangle, transform, MangledName};
use proptest::prelude::*;

fn int_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![(0i64..1000).prop_map(|i| i.to_string()), Just("a".to_string()), Just("b".to_string())];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "%"]), inner.clone(), any::<bool>())
                .prop_map(|(l, op, r, paren)| if paren { format!("({l} {op} {r})") } else { format!("{l} {op} {r}") }),
            inner.clone().prop_map(|e| format!("-({e})")),
            (inner.clone(), inner).prop_map(|(x, y)| format!("g({x}, {y})")),
        ]
    })
}

fn bool_expr() -> impl Strategy<Value = String> {
    let cmp = (int_expr(), prop::sample::select(vec!["<", "<=", ">", ">=", "==", "!="]), int_expr())
        .prop_map(|(l, op, r)| format!("{l} {op} {r}"));
    let leaf = prop_oneof![cmp, Just("c".to_string()), Just("true".to_string()), Just("false".to_string())];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["&&", "||"]), inner.clone())
                .prop_map(|(l, op, r)| format!("{l} {op} {r}")),
            inner.clone().prop_map(|e| format!("!({e})")),
            inner.prop_map(|e| format!("({e})")),
        ]
    })
}

fn stmt() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        (0u8..5, int_expr()).prop_map(|(i, e)| format!("int x{i} = {e};")),
        int_expr().prop_map(|e| format!("a = {e};")),
        int_expr().prop_map(|e| format!("return {e};")),
        Just("throw \"boom\";".to_string()),
        bool_expr().prop_map(|e| format!("c = {e};")),
    ];
    simple.prop_recursive(3, 12, 3, |inner| {
        (bool_expr(), prop::collection::vec(inner.clone(), 0..3), prop::option::of(prop::collection::vec(inner, 0..3)))
            .prop_map(|(cond, then, els)| match els {
                Some(e) => format!("if ({cond}) {{ {} }} else {{ {} }}", then.join(" "), e.join(" ")),
                None => format!("if ({cond}) {{ {} }}", then.join(" ")),
            })
    })
}

fn program() -> impl Strategy<Value = String> {
    prop::collection::vec(stmt(), 0..6).prop_map(|body| {
        format!(
            "class P {{ int f; static int g(int x, int y) {{ return x; }} \
             static int m(int a, int b, bool c) {{ {} return a; }} }}",
            body.join(" ")
        )
    })
}

fn round_trips(src: &str) {
    let t1 = parse(&SourceFile::new("p.ul", src)).unwrap();
    let printed = pretty_print(&t1);
    let t2 = parse(&SourceFile::new("p.ul", printed.as_str())).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    assert_eq!(t2.structure(), t1.structure(), "{printed}");
    assert_eq!(pretty_print(&t2), printed);
}

proptest! {
    #[test]
    fn printing_round_trips(src in program()) {
        round_trips(&src);
    }

    #[test]
    fn union_is_monotone(
        a in prop::collection::btree_set(0u32..40, 0..20),
        b in prop::collection::btree_set(0u32..40, 0..20),
        ea in prop::collection::btree_set((0u32..10, any::<bool>()), 0..10),
        eb in prop::collection::btree_set((0u32..10, any::<bool>()), 0..10),
    ) {
        let x = MethodCoverage { statements_hit: a, edges_hit: ea, entered: true, ..MethodCoverage::empty(40, 10) };
        let y = MethodCoverage { statements_hit: b, edges_hit: eb, entered: true, ..MethodCoverage::empty(40, 10) };
        let mut xy = x.clone();
        xy.merge(&y);
        let mut yx = y.clone();
        yx.merge(&x);
        prop_assert_eq!(&xy, &yx);
        let expected: BTreeSet<_> = x.statements_hit.union(&y.statements_hit).copied().collect();
        prop_assert_eq!(&xy.statements_hit, &expected);
        let (sx, bx) = x.percentages();
        let (s, b) = xy.percentages();
        prop_assert!(s >= sx && b >= bx);
        prop_assert_eq!(x.adds(&y), xy != x);
    }

    #[test]
    fn mangled_names_are_distinct_identifiers(
        parts in prop::collection::vec(
            ("[A-Z][a-zA-Z]{0,6}", "[a-zA-Z][a-zA-Z0-9]{0,6}", any::<bool>(), any::<bool>(),
             prop::collection::vec(prop::sample::select(vec![TypeName::Int, TypeName::Long, TypeName::Bool, TypeName::String]), 0..3)),
            1..12,
        )
    ) {
        let names: Vec<String> = parts
            .into_iter()
            .enumerate()
            .map(|(i, (container, member, is_field, is_static, params))| {
                MangledName { container, member, is_field, is_static, param_types: params, return_type: TypeName::Int, callsite_index: i }.render()
            })
            .collect();
        let unique: BTreeSet<_> = names.iter().collect();
        prop_assert_eq!(unique.len(), names.len());
        for n in &names {
            let src = format!("class A {{ int {n}() {{ return 0; }} }}");
            prop_assert!(parse(&SourceFile::new("a.ul", src)).is_ok(), "{}", n);
        }
    }

    #[test]
    fn isolated_corpus_never_reaches_the_environment(seed in any::<u64>()) {
        for p in common::corpus_projects() {
            for (entry, ex) in common::fuzz::isolated_executions(&p, 4, seed) {
                prop_assert!(common::fuzz::is_sound(&ex), "{}: {} {:?}", entry, ex.outcome, ex.side_effects);
            }
        }
    }
}

#[test]
fn corpus_files_round_trip() {
    for p in common::corpus_projects() {
        for f in &p.project.files {
            round_trips(&f.content);
        }
    }
}

#[test]
fn corpus_records_have_unique_names() {
    for p in common::corpus_projects() {
        let records = collect_external_accesses(&p.program, &p.table, &p.unit);
        let names: Vec<String> = records.iter().map(|r| mangle(r).render()).collect();
        let unique: BTreeSet<_> = names.iter().collect();
        assert_eq!(unique.len(), names.len(), "{}", p.project.name);
    }
}

#[test]
fn transformation_is_deterministic() {
    for p in common::corpus_projects() {
        let a = isolate(&p.program, &p.table, &p.unit);
        let b = isolate(&p.program, &p.table, &p.unit);
        assert_eq!(a.transform.records, b.transform.records);
        let print = |i: &isoforge::pipeline::Isolation| {
            i.transform.trees().chain(i.artifact.as_ref().unwrap().trees()).map(pretty_print).collect::<Vec<_>>()
        };
        assert_eq!(print(&a), print(&b));
        let direct = transform(&p.program, &p.table, &p.unit);
        assert_eq!(direct.records, a.transform.records);
    }
}

#[test]
fn isolated_corpus_type_checks() {
    for p in common::corpus_projects() {
        let iso = isolate(&p.program, &p.table, &p.unit);
        assert!(iso.type_errors.is_empty());
        assert!(resolve(iso.program.as_ref().unwrap()).is_ok());
    }
}

#[test]
fn executions_are_deterministic() {
    for p in common::corpus_projects() {
        let a = common::fuzz::isolated_executions(&p, 20, 7);
        let b = common::fuzz::isolated_executions(&p, 20, 7);
        for ((_, x), (_, y)) in a.iter().zip(&b) {
            assert_eq!(x.outcome, y.outcome);
            assert_eq!(x.coverage, y.coverage);
            assert_eq!(x.oracle_log, y.oracle_log);
        }
    }
}
