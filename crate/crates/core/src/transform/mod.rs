// SPDX-License-Identifier: Apache-2.0

//! Rewrites of the unit under test: external member accesses are routed to
//! generated fakes and external object creations become uninitialized
//! instantiations.

mod mangle;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::frontend::ast::*;
use crate::frontend::Program;
use crate::semantics::{access_sites, AccessKind, ExprType, MemberAccessRecord, NodeKey, SymbolTable, UnitSpec};

pub use mangle::{mangle, MangledName};

/// Name of the isolator method.
pub const ISOLATOR: &str = "_";
/// Prefix of generated static fake classes.
pub const STATIC_FAKE_PREFIX: &str = "FAKE_";

pub fn static_fake_class(container: &str) -> String {
    format!("{STATIC_FAKE_PREFIX}{container}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: unsupported construct: {}", self.path, self.line, self.col, self.message)
    }
}

/// An external `new T(..)` that was turned into `New<T>.get(..)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreationRecord {
    /// Node of the creation before the rewrite.
    pub node: NodeKey,
    pub created_type: String,
    pub ctor_arg_count: usize,
}

#[derive(Debug, Clone)]
pub struct TransformResult {
    /// The whole program, with unit files rewritten.
    pub program: Program,
    /// Indices of rewritten files.
    pub files: Vec<usize>,
    pub records: Vec<MemberAccessRecord>,
    pub creations: Vec<CreationRecord>,
    pub is_success: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl TransformResult {
    pub fn trees(&self) -> impl Iterator<Item = &SyntaxTree> {
        self.files.iter().map(|&i| &self.program.trees[i])
    }

    pub fn method_count(&self) -> usize {
        self.records.iter().filter(|r| r.member.kind == crate::semantics::MemberKind::Method).count()
    }

    pub fn member_count(&self) -> usize {
        self.records.len() - self.method_count()
    }
}

/// Routes every external member access of the unit through the isolator or a
/// static fake class. Unsupported constructs are reported as diagnostics.
pub fn transform_member_accesses(program: &Program, table: &SymbolTable, unit: &UnitSpec) -> TransformResult {
    let sites = access_sites(program, table, unit);
    let records = crate::semantics::collect_external_accesses(program, table, unit);
    let mut diagnostics = Vec::new();

    for s in sites.iter().filter(|s| s.external && s.kind == AccessKind::FieldWrite) {
        let span = find_expr_span(program, s.node);
        diagnostics.push(diag(
            program,
            s.node.file,
            span,
            format!("assignment to field `{}` of external class `{}`", s.member.name, s.container),
        ));
    }

    let by_node: HashMap<NodeKey, &MemberAccessRecord> = records.iter().map(|r| (r.node, r)).collect();
    let mut out = program.clone();
    let mut files = Vec::new();
    for (file, tree) in out.trees.iter_mut().enumerate() {
        if !tree.classes.iter().any(|c| unit.contains(&c.name)) {
            continue;
        }
        files.push(file);
        let path = tree.path.clone();
        for class in tree.classes.iter_mut().filter(|c| unit.contains(&c.name)) {
            let mut rw = AccessRewriter {
                table,
                unit,
                file,
                path: &path,
                caller: class.name.clone(),
                by_node: &by_node,
                diagnostics: &mut diagnostics,
            };
            rw.class(class);
        }
    }
    diagnostics.sort_by(|a, b| (&a.path, a.line, a.col).cmp(&(&b.path, b.line, b.col)));
    diagnostics.dedup();
    for &f in &files {
        out.trees[f].renumber();
    }
    TransformResult {
        program: out,
        files,
        records,
        creations: Vec::new(),
        is_success: diagnostics.is_empty(),
        diagnostics,
    }
}

/// Replaces `new T(args)` by `New<T>.get(args)` for every class `T` outside the unit.
pub fn transform_object_creations(mut result: TransformResult, unit: &UnitSpec) -> TransformResult {
    for &file in &result.files {
        let tree = &mut result.program.trees[file];
        for class in tree.classes.iter_mut().filter(|c| unit.contains(&c.name)) {
            let mut rw = CreationRewriter { unit, file, out: &mut result.creations };
            for_each_expr_mut(class, &mut |e| rw.expr(e));
        }
        tree.renumber();
    }
    result
}

/// Both passes in order.
pub fn transform(program: &Program, table: &SymbolTable, unit: &UnitSpec) -> TransformResult {
    transform_object_creations(transform_member_accesses(program, table, unit), unit)
}

fn diag(program: &Program, file: usize, span: Span, message: String) -> Diagnostic {
    Diagnostic { path: program.trees[file].path.clone(), line: span.line, col: span.col, message }
}

fn find_expr_span(program: &Program, key: NodeKey) -> Span {
    use crate::frontend::visit::{walk_tree, NodeKind, Visitor};
    struct Finder(NodeId, Option<Span>);
    impl Visitor for Finder {
        fn enter(&mut self, _: NodeKind, id: NodeId, span: Span) {
            if id == self.0 {
                self.1 = Some(span);
            }
        }
        fn leave(&mut self, _: NodeKind) {}
    }
    let mut f = Finder(key.node, None);
    walk_tree(&program.trees[key.file], &mut f);
    f.1.unwrap_or_default()
}

struct AccessRewriter<'a> {
    table: &'a SymbolTable,
    unit: &'a UnitSpec,
    file: usize,
    path: &'a str,
    caller: String,
    by_node: &'a HashMap<NodeKey, &'a MemberAccessRecord>,
    diagnostics: &'a mut Vec<Diagnostic>,
}

impl AccessRewriter<'_> {
    fn class(&mut self, class: &mut ClassDecl) {
        for_each_expr_mut(class, &mut |e| self.expr(e));
    }

    fn external_class_type(&self, e: &Expr) -> Option<String> {
        match self.table.expr_type(self.file, e.id)? {
            ExprType::Value(TypeName::Class(c)) if self.unit.is_external_access(&self.caller, c, self.table) => {
                Some(c.clone())
            }
            _ => None,
        }
    }

    fn report(&mut self, span: Span, message: String) {
        self.diagnostics.push(Diagnostic { path: self.path.to_string(), line: span.line, col: span.col, message });
    }

    /// Rewrites `e` after its children, so ids looked up are still the original ones.
    fn expr(&mut self, e: &mut Expr) {
        match &mut e.kind {
            ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::This => {}
            ExprKind::Unary { op, operand } => {
                if let Some(c) = self.external_class_type(operand) {
                    let msg = format!("operator `{}` applied to a value of external class `{c}`", op.symbol());
                    self.report(e.span, msg);
                }
                self.expr(operand);
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let ext = self.external_class_type(lhs).or_else(|| self.external_class_type(rhs));
                if let Some(c) = ext {
                    let msg = format!("operator `{}` applied to a value of external class `{c}`", op.symbol());
                    self.report(e.span, msg);
                }
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Member { receiver, .. } => self.expr(receiver),
            ExprKind::Call { callee, args, .. } => {
                if let ExprKind::Member { receiver, .. } = &mut callee.kind {
                    self.expr(receiver);
                }
                for a in args.iter_mut() {
                    self.expr(a);
                }
            }
            ExprKind::New { args, .. } | ExprKind::Instantiate { args, .. } => {
                for a in args.iter_mut() {
                    self.expr(a);
                }
            }
        }
        let key = NodeKey { file: self.file, node: e.id };
        if let Some(record) = self.by_node.get(&key) {
            rewrite_access(e, record);
        }
    }
}

fn rewrite_access(e: &mut Expr, record: &MemberAccessRecord) {
    let span = e.span;
    let name = mangle(record).render();
    let placeholder = Expr::new(ExprKind::Literal(Literal::Null), span);
    let old = std::mem::replace(e, placeholder);
    let (receiver, type_args, args) = match old.kind {
        ExprKind::Call { callee, type_args, args } => {
            let receiver = match callee.kind {
                ExprKind::Member { receiver, .. } => *receiver,
                _ => unreachable!("external calls are always qualified"),
            };
            (receiver, type_args, args)
        }
        ExprKind::Member { receiver, .. } => (*receiver, None, Vec::new()),
        _ => unreachable!("records point at calls or member accesses"),
    };
    let target = if record.is_static() {
        Expr::new(ExprKind::Ident(static_fake_class(&record.container.name)), receiver.span)
    } else {
        let isolator = Expr::new(ExprKind::Member { receiver: Box::new(receiver), name: ISOLATOR.to_string() }, span);
        Expr::new(ExprKind::Call { callee: Box::new(isolator), type_args: None, args: Vec::new() }, span)
    };
    let callee = Expr::new(ExprKind::Member { receiver: Box::new(target), name }, span);
    *e = Expr::new(ExprKind::Call { callee: Box::new(callee), type_args, args }, span);
}

struct CreationRewriter<'a> {
    unit: &'a UnitSpec,
    file: usize,
    out: &'a mut Vec<CreationRecord>,
}

impl CreationRewriter<'_> {
    fn expr(&mut self, e: &mut Expr) {
        match &mut e.kind {
            ExprKind::Unary { operand, .. } => self.expr(operand),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Member { receiver, .. } => self.expr(receiver),
            ExprKind::Call { callee, args, .. } => {
                self.expr(callee);
                for a in args.iter_mut() {
                    self.expr(a);
                }
            }
            ExprKind::New { ty, args } => {
                for a in args.iter_mut() {
                    self.expr(a);
                }
                if let TypeName::Class(name) = &ty.name {
                    if !self.unit.contains(name) {
                        self.out.push(CreationRecord {
                            node: NodeKey { file: self.file, node: e.id },
                            created_type: name.clone(),
                            ctor_arg_count: args.len(),
                        });
                        let ty = ty.clone();
                        let args = std::mem::take(args);
                        e.kind = ExprKind::Instantiate { ty, args };
                    }
                }
            }
            ExprKind::Instantiate { args, .. } => {
                for a in args.iter_mut() {
                    self.expr(a);
                }
            }
            ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::This => {}
        }
    }
}

/// Calls `f` on every top-level expression of the class (field initializers,
/// statement expressions), in source order.
fn for_each_expr_mut(class: &mut ClassDecl, f: &mut impl FnMut(&mut Expr)) {
    fn block(b: &mut Block, f: &mut impl FnMut(&mut Expr)) {
        for s in &mut b.stmts {
            match &mut s.kind {
                StmtKind::If { cond, then_block, else_block } => {
                    f(cond);
                    block(then_block, f);
                    if let Some(e) = else_block {
                        block(e, f);
                    }
                }
                StmtKind::Return(Some(e)) | StmtKind::Throw(e) | StmtKind::Expr(e) => f(e),
                StmtKind::Return(None) => {}
                StmtKind::Local { init, .. } => {
                    if let Some(e) = init {
                        f(e);
                    }
                }
                StmtKind::Assign { target, value } => {
                    f(target);
                    f(value);
                }
            }
        }
    }
    for m in &mut class.members {
        match m {
            Member::Field(fd) => {
                if let Some(e) = &mut fd.init {
                    f(e);
                }
            }
            Member::Method(md) => {
                if let Some(b) = &mut md.body {
                    block(b, f);
                }
            }
            Member::Ctor(c) => block(&mut c.body, f),
        }
    }
}

/// Names of external classes instantiated by the unit, in first-seen order.
pub fn created_types(result: &TransformResult) -> Vec<String> {
    let mut seen = BTreeSet::new();
    result.creations.iter().filter(|c| seen.insert(c.created_type.clone())).map(|c| c.created_type.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{pretty_print, SourceFile};
    use crate::semantics::resolve;

    fn run(src: &str, unit: &str) -> TransformResult {
        let p = Program::parse_with_prelude(&[SourceFile::new("t.ul", src)]).unwrap();
        let t = resolve(&p).unwrap_or_else(|e| panic!("{e:?}"));
        transform(&p, &t, &UnitSpec::single(unit))
    }

    #[test]
    fn identity_without_dependencies() {
        let src = "class A { int x; A(int v) { x = v; } int f(int a) { A o = new A(a); return o.g() + x; } int g() { return 1; } }";
        let r = run(src, "A");
        let before = crate::frontend::parse(&SourceFile::new("t.ul", src)).unwrap();
        assert!(r.is_success);
        assert!(r.records.is_empty() && r.creations.is_empty());
        assert_eq!(pretty_print(&r.program.trees[0]), pretty_print(&before));
    }

    #[test]
    fn method_calls_and_creations() {
        let src = "class External { int calc() { return 1; } static int staticCalc() { return 2; } }
                   class Example { bool run() { External e = new External(); int a = e.calc(); int b = e.calc(); int c = External.staticCalc(); return a + b - c > 10; } }";
        let r = run(src, "Example");
        assert!(r.is_success, "{:?}", r.diagnostics);
        let text = pretty_print(&r.program.trees[0]);
        assert!(text.contains("External e = New<External>.get();"), "{text}");
        assert!(text.contains("e._().ExternalCalcInt32_0()"), "{text}");
        assert!(text.contains("e._().ExternalCalcInt32_1()"), "{text}");
        assert!(text.contains("FAKE_External.staticCalcInt32_2()"), "{text}");
        // classes outside the unit are left alone
        assert!(text.contains("int calc() {\n        return 1;"), "{text}");
        assert_eq!(r.creations.len(), 1);
        assert_eq!((r.method_count(), r.member_count()), (3, 0));
    }

    #[test]
    fn creation_inside_argument() {
        let src = "class E { E(int v) { } } class U { int f(E e) { return 1; } int g() { return f(new E(1)); } }";
        let r = run(src, "U");
        assert!(pretty_print(&r.program.trees[0]).contains("return f(New<E>.get(1));"));
        assert_eq!(r.creations[0].ctor_arg_count, 1);
    }

    #[test]
    fn chained_access_rewrites_every_link() {
        let src = "class S { T link() { return new T(); } } class T { bool ok; }
                   class U { bool f(S s) { return s.link().ok; } }";
        let r = run(src, "U");
        let text = pretty_print(&r.program.trees[0]);
        assert!(text.contains("return s._().SLinkT_1()._().MemberTOkBoolean_0();"), "{text}");
    }

    #[test]
    fn operators_on_external_values_are_reported() {
        let src = "class Acct { int n; } class U { bool f(Acct a) { if (a == null) { return false; } return true; } }";
        let r = run(src, "U");
        assert!(!r.is_success);
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(
            r.diagnostics[0].to_string(),
            "t.ul:1:54: unsupported construct: operator `==` applied to a value of external class `Acct`"
        );
    }

    #[test]
    fn external_field_assignment_is_reported() {
        let src = "class Acct { int n; } class U { void f(Acct a) { a.n = 1; } }";
        let r = run(src, "U");
        assert!(!r.is_success);
        assert!(r.diagnostics[0].message.contains("field `n`"));
    }
}
