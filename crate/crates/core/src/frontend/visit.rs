// SPDX-License-Identifier: Apache-2.0

//! Generic pre-order traversal, id renumbering and structural fingerprints.

use std::fmt::Write;

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Unit,
    ClassDecl,
    FieldDecl,
    MethodDecl,
    CtorDecl,
    Param,
    Block,
    If,
    Return,
    Throw,
    LocalDecl,
    Assign,
    ExprStmt,
    MemberAccess,
    Invocation,
    ObjectCreation,
    Instantiate,
    BinaryOp,
    UnaryOp,
    Literal,
    Identifier,
    This,
    TypeRef,
    TypeArgList,
}

impl NodeKind {
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            NodeKind::If
                | NodeKind::Return
                | NodeKind::Throw
                | NodeKind::LocalDecl
                | NodeKind::Assign
                | NodeKind::ExprStmt
        )
    }
}

pub fn stmt_kind(stmt: &Stmt) -> NodeKind {
    match stmt.kind {
        StmtKind::If { .. } => NodeKind::If,
        StmtKind::Return(_) => NodeKind::Return,
        StmtKind::Throw(_) => NodeKind::Throw,
        StmtKind::Local { .. } => NodeKind::LocalDecl,
        StmtKind::Assign { .. } => NodeKind::Assign,
        StmtKind::Expr(_) => NodeKind::ExprStmt,
    }
}

pub fn expr_kind(expr: &Expr) -> NodeKind {
    match expr.kind {
        ExprKind::Literal(_) => NodeKind::Literal,
        ExprKind::Ident(_) => NodeKind::Identifier,
        ExprKind::This => NodeKind::This,
        ExprKind::Unary { .. } => NodeKind::UnaryOp,
        ExprKind::Binary { .. } => NodeKind::BinaryOp,
        ExprKind::Member { .. } => NodeKind::MemberAccess,
        ExprKind::Call { .. } => NodeKind::Invocation,
        ExprKind::New { .. } => NodeKind::ObjectCreation,
        ExprKind::Instantiate { .. } => NodeKind::Instantiate,
    }
}

/// Receives every node of a tree in pre-order.
pub trait Visitor {
    fn enter(&mut self, kind: NodeKind, id: NodeId, span: Span);
    fn leave(&mut self, _kind: NodeKind) {}
}

pub fn walk_tree(tree: &SyntaxTree, v: &mut impl Visitor) {
    v.enter(NodeKind::Unit, tree.id, tree.span);
    for class in &tree.classes {
        walk_class(class, v);
    }
    v.leave(NodeKind::Unit);
}

pub fn walk_class(class: &ClassDecl, v: &mut impl Visitor) {
    v.enter(NodeKind::ClassDecl, class.id, class.span);
    if let Some(sup) = &class.supertype {
        walk_type(sup, v);
    }
    for member in &class.members {
        match member {
            Member::Field(f) => {
                v.enter(NodeKind::FieldDecl, f.id, f.span);
                walk_type(&f.ty, v);
                if let Some(init) = &f.init {
                    walk_expr(init, v);
                }
                v.leave(NodeKind::FieldDecl);
            }
            Member::Method(m) => {
                v.enter(NodeKind::MethodDecl, m.id, m.span);
                walk_type(&m.ret, v);
                for p in &m.params {
                    walk_param(p, v);
                }
                if let Some(body) = &m.body {
                    walk_block(body, v);
                }
                v.leave(NodeKind::MethodDecl);
            }
            Member::Ctor(c) => {
                v.enter(NodeKind::CtorDecl, c.id, c.span);
                for p in &c.params {
                    walk_param(p, v);
                }
                walk_block(&c.body, v);
                v.leave(NodeKind::CtorDecl);
            }
        }
    }
    v.leave(NodeKind::ClassDecl);
}

fn walk_type(t: &TypeRef, v: &mut impl Visitor) {
    v.enter(NodeKind::TypeRef, t.id, t.span);
    v.leave(NodeKind::TypeRef);
}

fn walk_param(p: &Param, v: &mut impl Visitor) {
    v.enter(NodeKind::Param, p.id, p.span);
    walk_type(&p.ty, v);
    v.leave(NodeKind::Param);
}

pub fn walk_block(block: &Block, v: &mut impl Visitor) {
    v.enter(NodeKind::Block, block.id, block.span);
    for stmt in &block.stmts {
        walk_stmt(stmt, v);
    }
    v.leave(NodeKind::Block);
}

pub fn walk_stmt(stmt: &Stmt, v: &mut impl Visitor) {
    let kind = stmt_kind(stmt);
    v.enter(kind, stmt.id, stmt.span);
    match &stmt.kind {
        StmtKind::If { cond, then_block, else_block } => {
            walk_expr(cond, v);
            walk_block(then_block, v);
            if let Some(b) = else_block {
                walk_block(b, v);
            }
        }
        StmtKind::Return(e) => {
            if let Some(e) = e {
                walk_expr(e, v);
            }
        }
        StmtKind::Throw(e) | StmtKind::Expr(e) => walk_expr(e, v),
        StmtKind::Local { ty, init, .. } => {
            walk_type(ty, v);
            if let Some(e) = init {
                walk_expr(e, v);
            }
        }
        StmtKind::Assign { target, value } => {
            walk_expr(target, v);
            walk_expr(value, v);
        }
    }
    v.leave(kind);
}

pub fn walk_expr(expr: &Expr, v: &mut impl Visitor) {
    let kind = expr_kind(expr);
    v.enter(kind, expr.id, expr.span);
    match &expr.kind {
        ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::This => {}
        ExprKind::Unary { operand, .. } => walk_expr(operand, v),
        ExprKind::Binary { lhs, rhs, .. } => {
            walk_expr(lhs, v);
            walk_expr(rhs, v);
        }
        ExprKind::Member { receiver, .. } => walk_expr(receiver, v),
        ExprKind::Call { callee, type_args, args } => {
            walk_expr(callee, v);
            if let Some(ta) = type_args {
                v.enter(NodeKind::TypeArgList, ta.id, ta.span);
                for t in &ta.args {
                    walk_type(t, v);
                }
                v.leave(NodeKind::TypeArgList);
            }
            for a in args {
                walk_expr(a, v);
            }
        }
        ExprKind::New { ty, args } | ExprKind::Instantiate { ty, args } => {
            walk_type(ty, v);
            for a in args {
                walk_expr(a, v);
            }
        }
    }
    v.leave(kind);
}

struct Numbering(NodeId);

impl Numbering {
    fn next(&mut self, id: &mut NodeId) {
        *id = self.0;
        self.0 += 1;
    }

    fn ty(&mut self, t: &mut TypeRef) {
        self.next(&mut t.id);
    }

    fn param(&mut self, p: &mut Param) {
        self.next(&mut p.id);
        self.ty(&mut p.ty);
    }

    fn class(&mut self, class: &mut ClassDecl) {
        self.next(&mut class.id);
        if let Some(sup) = &mut class.supertype {
            self.ty(sup);
        }
        for member in &mut class.members {
            match member {
                Member::Field(f) => {
                    self.next(&mut f.id);
                    self.ty(&mut f.ty);
                    if let Some(init) = &mut f.init {
                        self.expr(init);
                    }
                }
                Member::Method(m) => {
                    self.next(&mut m.id);
                    self.ty(&mut m.ret);
                    m.params.iter_mut().for_each(|p| self.param(p));
                    if let Some(body) = &mut m.body {
                        self.block(body);
                    }
                }
                Member::Ctor(c) => {
                    self.next(&mut c.id);
                    c.params.iter_mut().for_each(|p| self.param(p));
                    self.block(&mut c.body);
                }
            }
        }
    }

    fn block(&mut self, block: &mut Block) {
        self.next(&mut block.id);
        for stmt in &mut block.stmts {
            self.stmt(stmt);
        }
    }

    fn stmt(&mut self, stmt: &mut Stmt) {
        self.next(&mut stmt.id);
        match &mut stmt.kind {
            StmtKind::If { cond, then_block, else_block } => {
                self.expr(cond);
                self.block(then_block);
                if let Some(b) = else_block {
                    self.block(b);
                }
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e);
                }
            }
            StmtKind::Throw(e) | StmtKind::Expr(e) => self.expr(e),
            StmtKind::Local { ty, init, .. } => {
                self.ty(ty);
                if let Some(e) = init {
                    self.expr(e);
                }
            }
            StmtKind::Assign { target, value } => {
                self.expr(target);
                self.expr(value);
            }
        }
    }

    fn expr(&mut self, expr: &mut Expr) {
        self.next(&mut expr.id);
        match &mut expr.kind {
            ExprKind::Literal(_) | ExprKind::Ident(_) | ExprKind::This => {}
            ExprKind::Unary { operand, .. } => self.expr(operand),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Member { receiver, .. } => self.expr(receiver),
            ExprKind::Call { callee, type_args, args } => {
                self.expr(callee);
                if let Some(ta) = type_args {
                    self.next(&mut ta.id);
                    ta.args.iter_mut().for_each(|t| self.ty(t));
                }
                args.iter_mut().for_each(|a| self.expr(a));
            }
            ExprKind::New { ty, args } | ExprKind::Instantiate { ty, args } => {
                self.ty(ty);
                args.iter_mut().for_each(|a| self.expr(a));
            }
        }
    }
}

impl SyntaxTree {
    /// Reassigns node ids in pre-order so they cover `0..node_count()` exactly.
    pub fn renumber(&mut self) {
        let mut n = Numbering(0);
        n.next(&mut self.id);
        for class in &mut self.classes {
            n.class(class);
        }
    }

    pub fn node_count(&self) -> usize {
        struct Count(usize);
        impl Visitor for Count {
            fn enter(&mut self, _: NodeKind, _: NodeId, _: Span) {
                self.0 += 1;
            }
        }
        let mut c = Count(0);
        walk_tree(self, &mut c);
        c.0
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Shape of the tree with ids and spans erased. Two trees are
    /// structurally identical iff their fingerprints are equal.
    pub fn structure(&self) -> String {
        let mut out = String::new();
        for class in &self.classes {
            class_structure(class, &mut out);
            out.push('\n');
        }
        out
    }
}

fn class_structure(class: &ClassDecl, out: &mut String) {
    let _ = write!(out, "(class{} {}", if class.is_static { " static" } else { "" }, class.name);
    if let Some(s) = &class.supertype {
        let _ = write!(out, " (extends {})", s.name);
    }
    for member in &class.members {
        match member {
            Member::Field(f) => {
                let _ = write!(out, " (field{} {} {}", static_tag(f.is_static), f.ty.name, f.name);
                if let Some(e) = &f.init {
                    out.push(' ');
                    expr_structure(e, out);
                }
                out.push(')');
            }
            Member::Method(m) => {
                let _ = write!(
                    out,
                    " (method{}{} {} {} <{}> (",
                    static_tag(m.is_static),
                    if m.is_native { " native" } else { "" },
                    m.ret.name,
                    m.name,
                    m.type_params.join(",")
                );
                params_structure(&m.params, out);
                out.push(')');
                if let Some(b) = &m.body {
                    out.push(' ');
                    block_structure(b, out);
                }
                out.push(')');
            }
            Member::Ctor(c) => {
                out.push_str(" (ctor (");
                params_structure(&c.params, out);
                out.push_str(") ");
                block_structure(&c.body, out);
                out.push(')');
            }
        }
    }
    out.push(')');
}

fn static_tag(is_static: bool) -> &'static str {
    if is_static {
        " static"
    } else {
        ""
    }
}

fn params_structure(params: &[Param], out: &mut String) {
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}:{}", p.name, p.ty.name);
    }
}

fn block_structure(b: &Block, out: &mut String) {
    out.push_str("(block");
    for s in &b.stmts {
        out.push(' ');
        stmt_structure(s, out);
    }
    out.push(')');
}

fn stmt_structure(s: &Stmt, out: &mut String) {
    match &s.kind {
        StmtKind::If { cond, then_block, else_block } => {
            out.push_str("(if ");
            expr_structure(cond, out);
            out.push(' ');
            block_structure(then_block, out);
            if let Some(b) = else_block {
                out.push(' ');
                block_structure(b, out);
            }
            out.push(')');
        }
        StmtKind::Return(e) => {
            out.push_str("(return");
            if let Some(e) = e {
                out.push(' ');
                expr_structure(e, out);
            }
            out.push(')');
        }
        StmtKind::Throw(e) => {
            out.push_str("(throw ");
            expr_structure(e, out);
            out.push(')');
        }
        StmtKind::Local { ty, name, init } => {
            let _ = write!(out, "(local {} {}", ty.name, name);
            if let Some(e) = init {
                out.push(' ');
                expr_structure(e, out);
            }
            out.push(')');
        }
        StmtKind::Assign { target, value } => {
            out.push_str("(assign ");
            expr_structure(target, out);
            out.push(' ');
            expr_structure(value, out);
            out.push(')');
        }
        StmtKind::Expr(e) => {
            out.push_str("(expr ");
            expr_structure(e, out);
            out.push(')');
        }
    }
}

fn expr_structure(e: &Expr, out: &mut String) {
    match &e.kind {
        ExprKind::Literal(lit) => {
            let _ = write!(out, "{lit:?}");
        }
        ExprKind::Ident(name) => {
            let _ = write!(out, "(id {name})");
        }
        ExprKind::This => out.push_str("this"),
        ExprKind::Unary { op, operand } => {
            let _ = write!(out, "({} ", op.symbol());
            expr_structure(operand, out);
            out.push(')');
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let _ = write!(out, "({} ", op.symbol());
            expr_structure(lhs, out);
            out.push(' ');
            expr_structure(rhs, out);
            out.push(')');
        }
        ExprKind::Member { receiver, name } => {
            out.push_str("(. ");
            expr_structure(receiver, out);
            let _ = write!(out, " {name})");
        }
        ExprKind::Call { callee, type_args, args } => {
            out.push_str("(call ");
            expr_structure(callee, out);
            if let Some(ta) = type_args {
                out.push_str(" <");
                for (i, t) in ta.args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}", t.name);
                }
                out.push('>');
            }
            args_structure(args, out);
            out.push(')');
        }
        ExprKind::New { ty, args } => {
            let _ = write!(out, "(new {}", ty.name);
            args_structure(args, out);
            out.push(')');
        }
        ExprKind::Instantiate { ty, args } => {
            let _ = write!(out, "(uninit {}", ty.name);
            args_structure(args, out);
            out.push(')');
        }
    }
}

fn args_structure(args: &[Expr], out: &mut String) {
    for a in args {
        out.push(' ');
        expr_structure(a, out);
    }
}
