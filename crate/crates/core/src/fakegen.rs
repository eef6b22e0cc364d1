// SPDX-License-Identifier: Apache-2.0

//! Generation of the Fake singleton, per-container static fakes and the basic
//! environment the transformed unit relies on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::ast::{SourceFile, SyntaxTree, TypeName};
use crate::frontend::{parse, Program};
use crate::semantics::{MemberAccessRecord, SymbolTable, ENV_CLASS, INSTANTIATE_NATIVE, ISOLATE_NATIVE};
use crate::transform::{mangle, static_fake_class};

pub const FAKE_CLASS: &str = "Fake";
pub const FAKE_FILE: &str = "Fake.ul";
pub const ENV_FILE: &str = "Env.ul";

/// A choice point inside a fake body.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChoiceLabel {
    pub label: String,
    pub value_type: TypeName,
}

#[derive(Debug, Clone)]
pub struct FakeArtifact {
    pub singleton: SyntaxTree,
    /// Keyed by container class name.
    pub static_classes: BTreeMap<String, SyntaxTree>,
    pub environment: SyntaxTree,
    pub choice_labels: Vec<ChoiceLabel>,
}

impl FakeArtifact {
    /// All generated files: `Fake.ul`, then `FAKE_<C>.ul` by container, then `Env.ul`.
    pub fn trees(&self) -> impl Iterator<Item = &SyntaxTree> {
        std::iter::once(&self.singleton).chain(self.static_classes.values()).chain(std::iter::once(&self.environment))
    }

    /// Adds the generated trees to `program`.
    pub fn install(&self, program: &mut Program) {
        for t in self.trees() {
            program.replace_or_add(t.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FakeGenError {
    #[error("choice label `{0}` generated twice")]
    DuplicateLabel(String),
    #[error("type `{ty}` used by `{member}` does not resolve")]
    UnknownType { member: String, ty: String },
}

/// Native used by fake bodies to draw a value of `ty` from the choice oracle.
pub fn chooser(ty: &TypeName) -> Option<&'static str> {
    match ty {
        TypeName::Int => Some("chooseInt"),
        TypeName::Long => Some("chooseLong"),
        TypeName::Bool => Some("chooseBool"),
        TypeName::String => Some("chooseString"),
        _ => None,
    }
}

pub fn choice_label(record: &MemberAccessRecord) -> String {
    format!("{}.ret", mangle(record).render())
}

/// One label per record with a primitive return type, in record order.
pub fn assign_choice_labels(records: &[MemberAccessRecord]) -> Vec<ChoiceLabel> {
    records
        .iter()
        .filter(|r| r.member.return_type.is_primitive())
        .map(|r| ChoiceLabel { label: choice_label(r), value_type: r.member.return_type.clone() })
        .collect()
}

/// Source of the environment: isolator and instantiator natives plus choice bindings.
pub fn basic_environment_source() -> String {
    format!(
        "class {ENV_CLASS} {{
    static native {FAKE_CLASS} {ISOLATE_NATIVE}(object receiver);
    static native object {INSTANTIATE_NATIVE}(string typeName);
    static native int chooseInt(string label);
    static native long chooseLong(string label);
    static native bool chooseBool(string label);
    static native string chooseString(string label);
}}
"
    )
}

pub fn generate_basic_environment() -> SyntaxTree {
    parse(&SourceFile::new(ENV_FILE, basic_environment_source())).expect("environment parses")
}

/// Builds one fake member per record. When `table` is given, every type the
/// fakes mention must resolve in it.
pub fn generate_fake_code(
    records: &[MemberAccessRecord],
    table: Option<&SymbolTable>,
) -> Result<FakeArtifact, FakeGenError> {
    let mut labels = BTreeSet::new();
    let mut instance = String::new();
    let mut statics: BTreeMap<String, String> = BTreeMap::new();

    for r in records {
        if let Some(table) = table {
            check_types(r, table)?;
        }
        let name = mangle(r).render();
        let ret = &r.member.return_type;
        let body = if *ret == TypeName::Void {
            String::new()
        } else if let Some(native) = chooser(ret) {
            let label = choice_label(r);
            if !labels.insert(label.clone()) {
                return Err(FakeGenError::DuplicateLabel(label));
            }
            format!("        return {ENV_CLASS}.{native}(\"{label}\");\n")
        } else {
            format!("        return New<{ret}>.get();\n")
        };
        let type_params = if r.member.type_params.is_empty() {
            String::new()
        } else {
            format!("<{}>", r.member.type_params.join(", "))
        };
        let params: Vec<String> =
            r.member.param_types.iter().zip(&r.member.param_names).map(|(t, n)| format!("{t} {n}")).collect();
        let is_static = r.is_static();
        let mut text = String::new();
        let _ = write!(
            text,
            "    {}{ret} {name}{type_params}({}) {{\n{body}    }}\n",
            if is_static { "static " } else { "" },
            params.join(", ")
        );
        if is_static {
            statics.entry(r.container.name.clone()).or_default().push_str(&text);
        } else {
            instance.push_str(&text);
        }
    }

    let singleton = parse(&SourceFile::new(FAKE_FILE, format!("class {FAKE_CLASS} {{\n{instance}}}\n")))
        .expect("generated fake parses");
    let static_classes = statics
        .into_iter()
        .map(|(container, members)| {
            let class = static_fake_class(&container);
            let src = format!("static class {class} {{\n{members}}}\n");
            let tree = parse(&SourceFile::new(format!("{class}.ul"), src)).expect("generated fake parses");
            (container, tree)
        })
        .collect();
    Ok(FakeArtifact {
        singleton,
        static_classes,
        environment: generate_basic_environment(),
        choice_labels: assign_choice_labels(records),
    })
}

fn check_types(r: &MemberAccessRecord, table: &SymbolTable) -> Result<(), FakeGenError> {
    let known = |t: &TypeName| match t {
        TypeName::Class(c) => r.member.type_params.contains(c) || table.class_exists(c),
        _ => true,
    };
    for t in r.member.param_types.iter().chain(std::iter::once(&r.member.return_type)) {
        if !known(t) {
            return Err(FakeGenError::UnknownType { member: r.member.name.clone(), ty: t.to_string() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::pretty_print;
    use crate::semantics::{collect_external_accesses, resolve, UnitSpec};

    fn records(src: &str, unit: &str) -> (Vec<MemberAccessRecord>, SymbolTable) {
        let p = Program::parse_with_prelude(&[SourceFile::new("t.ul", src)]).unwrap();
        let t = resolve(&p).unwrap();
        (collect_external_accesses(&p, &t, &UnitSpec::single(unit)), t)
    }

    #[test]
    fn empty_records_give_empty_fake() {
        let a = generate_fake_code(&[], None).unwrap();
        assert_eq!(pretty_print(&a.singleton), "class Fake {\n}\n");
        assert!(a.static_classes.is_empty());
        assert!(a.choice_labels.is_empty());
        assert_eq!(a.environment.classes[0].name, ENV_CLASS);
    }

    #[test]
    fn void_fake_has_empty_body() {
        let (recs, t) = records(
            "class Log { void write(int level, string msg) { } } class U { void f(Log l) { l.write(1, \"m\"); } }",
            "U",
        );
        let a = generate_fake_code(&recs, Some(&t)).unwrap();
        assert_eq!(
            pretty_print(&a.singleton),
            "class Fake {\n    void LogWriteInt32StringVoid_0(int level, string msg) {\n    }\n}\n"
        );
        assert!(a.choice_labels.is_empty());
    }

    #[test]
    fn one_label_per_primitive_return() {
        let src = "class E { int a() { return 1; } E b() { return this; } bool c; static string d() { return \"\"; } }
                   class U { void f(E e) { int x = e.a(); E y = e.b(); bool z = e.c; string w = E.d(); } }";
        let (recs, t) = records(src, "U");
        let a = generate_fake_code(&recs, Some(&t)).unwrap();
        let labels: Vec<&str> = a.choice_labels.iter().map(|l| l.label.as_str()).collect();
        assert_eq!(labels, vec!["EAInt32_0.ret", "MemberECBoolean_2.ret", "dString_3.ret"]);
        assert!(pretty_print(&a.singleton).contains("return New<E>.get();"));
        assert!(
            pretty_print(&a.static_classes["E"]).starts_with("static class FAKE_E {\n    static string dString_3() {")
        );
    }
}
