// SPDX-License-Identifier: Apache-2.0

//! Syntax tree for the subject language.
//!
//! Every node carries a [`NodeId`] and a [`Span`]. Ids are assigned in
//! pre-order by the parser and form a bijection onto `0..N` for a tree;
//! [`SyntaxTree::renumber`] restores that property after a rewrite.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type NodeId = u32;

/// Byte range plus 1-based line/column of its first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Span {
    pub offset: u32,
    pub len: u32,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn end(&self) -> u32 {
        self.offset + self.len
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: Span) -> Span {
        let end = self.end().max(other.end());
        Span { len: end - self.offset, ..*self }
    }

    pub fn contains(&self, inner: &Span) -> bool {
        inner.offset >= self.offset && inner.end() <= self.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub path: String,
    pub content: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, content: impl Into<String>) -> Self {
        Self { path: path.into(), content: content.into() }
    }
}

/// A parsed compilation unit.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxTree {
    pub path: String,
    pub id: NodeId,
    pub span: Span,
    pub classes: Vec<ClassDecl>,
}

/// Types as written in source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeName {
    Int,
    Long,
    Bool,
    String,
    Void,
    Object,
    Class(String),
}

impl TypeName {
    pub fn is_primitive(&self) -> bool {
        matches!(self, TypeName::Int | TypeName::Long | TypeName::Bool | TypeName::String)
    }

    pub fn is_reference(&self) -> bool {
        matches!(self, TypeName::Object | TypeName::Class(_))
    }

    /// The framework-style name used when building mangled identifiers.
    pub fn clr_name(&self) -> &str {
        match self {
            TypeName::Int => "Int32",
            TypeName::Long => "Int64",
            TypeName::Bool => "Boolean",
            TypeName::String => "String",
            TypeName::Void => "Void",
            TypeName::Object => "Object",
            TypeName::Class(name) => name,
        }
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeName::Int => "int",
            TypeName::Long => "long",
            TypeName::Bool => "bool",
            TypeName::String => "string",
            TypeName::Void => "void",
            TypeName::Object => "object",
            TypeName::Class(name) => name,
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeRef {
    pub id: NodeId,
    pub span: Span,
    pub name: TypeName,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeArgList {
    pub id: NodeId,
    pub span: Span,
    pub args: Vec<TypeRef>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub id: NodeId,
    pub span: Span,
    pub is_static: bool,
    pub name: String,
    pub supertype: Option<TypeRef>,
    pub members: Vec<Member>,
}

impl ClassDecl {
    pub fn methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Method(m) => Some(m),
            _ => None,
        })
    }

    pub fn fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Field(f) => Some(f),
            _ => None,
        })
    }

    pub fn ctor(&self) -> Option<&CtorDecl> {
        self.members.iter().find_map(|m| match m {
            Member::Ctor(c) => Some(c),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Field(FieldDecl),
    Method(MethodDecl),
    Ctor(CtorDecl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub id: NodeId,
    pub span: Span,
    pub is_static: bool,
    pub ty: TypeRef,
    pub name: String,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub id: NodeId,
    pub span: Span,
    pub is_static: bool,
    pub is_native: bool,
    pub ret: TypeRef,
    pub name: String,
    pub type_params: Vec<String>,
    pub params: Vec<Param>,
    /// `None` only for native methods.
    pub body: Option<Block>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtorDecl {
    pub id: NodeId,
    pub span: Span,
    pub params: Vec<Param>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub id: NodeId,
    pub span: Span,
    pub ty: TypeRef,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub id: NodeId,
    pub span: Span,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub id: NodeId,
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    If { cond: Expr, then_block: Block, else_block: Option<Block> },
    Return(Option<Expr>),
    Throw(Expr),
    Local { ty: TypeRef, name: String, init: Option<Expr> },
    Assign { target: Expr, value: Expr },
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub id: NodeId,
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Ident(String),
    This,
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// Field read, or the callee of an [`ExprKind::Call`].
    Member {
        receiver: Box<Expr>,
        name: String,
    },
    /// `callee` is always an `Ident` or a `Member`.
    Call {
        callee: Box<Expr>,
        type_args: Option<TypeArgList>,
        args: Vec<Expr>,
    },
    New {
        ty: TypeRef,
        args: Vec<Expr>,
    },
    /// `New<T>.get(args)`: allocation without running a constructor.
    Instantiate {
        ty: TypeRef,
        args: Vec<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding power; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem => 6,
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge | BinaryOp::Eq | BinaryOp::Ne)
    }
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Neg => "-",
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { id: 0, span, kind }
    }
}
