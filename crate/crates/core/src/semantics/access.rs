// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::*;
use crate::frontend::ast::*;
use crate::frontend::Program;

/// Classes composing the unit under test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSpec {
    pub class_names: BTreeSet<String>,
}

impl UnitSpec {
    pub fn new<I, S>(names: I) -> Result<Self, UnitError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let class_names: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        if class_names.is_empty() {
            return Err(UnitError::Empty);
        }
        Ok(Self { class_names })
    }

    pub fn single(name: &str) -> Self {
        Self { class_names: BTreeSet::from([name.to_string()]) }
    }

    pub fn contains(&self, class: &str) -> bool {
        self.class_names.contains(class)
    }

    /// Every unit class must be declared by the program.
    pub fn validate(&self, program: &Program) -> Result<(), UnitError> {
        for name in &self.class_names {
            if program.find_class(name).is_none() {
                return Err(UnitError::UnknownClass(name.clone()));
            }
        }
        Ok(())
    }

    /// A member is external when its declaring class is outside the unit and
    /// the calling class does not inherit from it.
    pub fn is_external(&self, record: &MemberAccessRecord, table: &SymbolTable) -> bool {
        self.is_external_access(&record.caller_class, &record.container.name, table)
    }

    pub fn is_external_access(&self, caller: &str, container: &str, table: &SymbolTable) -> bool {
        !self.contains(container) && !table.is_subtype(caller, container)
    }
}

/// Metadata of one external callsite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberAccessRecord {
    /// Global 0-based index in tree-walk order across the unit.
    pub callsite_index: usize,
    pub container: TypeInfo,
    pub member: MemberSig,
    pub receiver_is_static_type: bool,
    pub type_args: Vec<TypeName>,
    pub node: NodeKey,
    pub caller_class: String,
    /// `Class.method`, `Class.ctor` or `Class.<init>`.
    pub enclosing_method: String,
}

impl MemberAccessRecord {
    /// Static when either the member or its container is static.
    pub fn is_static(&self) -> bool {
        self.member.is_static || self.container.is_static
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccessKind {
    Method,
    FieldRead,
    FieldWrite,
}

/// A member access site inside the unit, classified as internal or external.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessSite {
    pub node: NodeKey,
    pub kind: AccessKind,
    pub container: String,
    pub member: MemberSig,
    pub static_receiver: bool,
    /// `false` for unqualified accesses (`f()`, `x`) that go through `this` or the own class.
    pub qualified: bool,
    pub external: bool,
    pub type_args: Vec<TypeName>,
    pub caller_class: String,
    pub enclosing_method: String,
}

/// All member access sites of unit classes, in file order then pre-order.
pub fn access_sites(program: &Program, table: &SymbolTable, unit: &UnitSpec) -> Vec<AccessSite> {
    let mut out = Vec::new();
    for (file, tree) in program.trees.iter().enumerate() {
        for class in tree.classes.iter().filter(|c| unit.contains(&c.name)) {
            let mut w = SiteWalker { table, unit, file, class: &class.name, enclosing: String::new(), out: &mut out };
            for member in &class.members {
                match member {
                    Member::Field(f) => {
                        w.enclosing = format!("{}.<init>", class.name);
                        if let Some(e) = &f.init {
                            w.expr(e, false);
                        }
                    }
                    Member::Method(m) => {
                        w.enclosing = format!("{}.{}", class.name, m.name);
                        if let Some(b) = &m.body {
                            w.block(b);
                        }
                    }
                    Member::Ctor(c) => {
                        w.enclosing = format!("{}.ctor", class.name);
                        w.block(&c.body);
                    }
                }
            }
        }
    }
    out
}

/// External member accesses of the unit, numbered by global callsite index.
/// Field writes are excluded; the transformer reports them as unsupported.
pub fn collect_external_accesses(program: &Program, table: &SymbolTable, unit: &UnitSpec) -> Vec<MemberAccessRecord> {
    access_sites(program, table, unit)
        .into_iter()
        .filter(|s| s.external && s.kind != AccessKind::FieldWrite)
        .enumerate()
        .map(|(i, s)| MemberAccessRecord {
            callsite_index: i,
            container: table.type_info(&s.container).cloned().expect("resolved container"),
            member: s.member,
            receiver_is_static_type: s.static_receiver,
            type_args: s.type_args,
            node: s.node,
            caller_class: s.caller_class,
            enclosing_method: s.enclosing_method,
        })
        .collect()
}

struct SiteWalker<'a> {
    table: &'a SymbolTable,
    unit: &'a UnitSpec,
    file: usize,
    class: &'a str,
    enclosing: String,
    out: &'a mut Vec<AccessSite>,
}

impl SiteWalker<'_> {
    fn block(&mut self, b: &Block) {
        for s in &b.stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::If { cond, then_block, else_block } => {
                self.expr(cond, false);
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::Return(Some(e)) | StmtKind::Throw(e) | StmtKind::Expr(e) => self.expr(e, false),
            StmtKind::Return(None) => {}
            StmtKind::Local { init, .. } => {
                if let Some(e) = init {
                    self.expr(e, false);
                }
            }
            StmtKind::Assign { target, value } => {
                self.expr(target, true);
                self.expr(value, false);
            }
        }
    }

    fn push(&mut self, node: NodeId, kind: AccessKind, res: &Resolution, qualified: bool, type_args: Vec<TypeName>) {
        let (container, member, static_receiver) = match res {
            Resolution::Field { container, member, static_receiver }
            | Resolution::Method { container, member, static_receiver } => {
                (container.clone(), member.clone(), *static_receiver)
            }
            _ => return,
        };
        let external = self.unit.is_external_access(self.class, &container, self.table);
        self.out.push(AccessSite {
            node: NodeKey { file: self.file, node },
            kind,
            container,
            member,
            static_receiver,
            qualified,
            external,
            type_args,
            caller_class: self.class.to_string(),
            enclosing_method: self.enclosing.clone(),
        });
    }

    fn expr(&mut self, e: &Expr, is_write: bool) {
        let res = self.table.resolution(self.file, e.id).cloned();
        match &e.kind {
            ExprKind::Literal(_) | ExprKind::This => {}
            ExprKind::Ident(_) => {
                if let Some(res @ Resolution::Field { .. }) = &res {
                    let kind = if is_write { AccessKind::FieldWrite } else { AccessKind::FieldRead };
                    self.push(e.id, kind, res, false, Vec::new());
                }
            }
            ExprKind::Unary { operand, .. } => self.expr(operand, false),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs, false);
                self.expr(rhs, false);
            }
            ExprKind::Member { receiver, .. } => {
                if let Some(res) = &res {
                    let kind = if is_write { AccessKind::FieldWrite } else { AccessKind::FieldRead };
                    self.push(e.id, kind, res, true, Vec::new());
                }
                self.expr(receiver, false);
            }
            ExprKind::Call { callee, type_args, args } => {
                if let Some(res) = &res {
                    let targs =
                        type_args.as_ref().map(|t| t.args.iter().map(|a| a.name.clone()).collect()).unwrap_or_default();
                    let qualified = matches!(callee.kind, ExprKind::Member { .. });
                    self.push(e.id, AccessKind::Method, res, qualified, targs);
                }
                if let ExprKind::Member { receiver, .. } = &callee.kind {
                    self.expr(receiver, false);
                }
                for a in args {
                    self.expr(a, false);
                }
            }
            ExprKind::New { args, .. } | ExprKind::Instantiate { args, .. } => {
                for a in args {
                    self.expr(a, false);
                }
            }
        }
    }
}
