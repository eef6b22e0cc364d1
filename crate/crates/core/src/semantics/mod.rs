// SPDX-License-Identifier: Apache-2.0

//! Name and type resolution, unit membership, and classification of member
//! accesses as internal or external to the unit under test.

mod access;
mod check;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::ast::{NodeId, Span, TypeName};

pub use access::{access_sites, collect_external_accesses, AccessKind, AccessSite, MemberAccessRecord, UnitSpec};
pub use check::resolve;
pub use check::{ENV_CLASS, INSTANTIATE_NATIVE, ISOLATE_NATIVE};

/// Identifies a node across a whole program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeKey {
    pub file: usize,
    pub node: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Method,
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberSig {
    pub name: String,
    pub kind: MemberKind,
    pub param_names: Vec<String>,
    pub param_types: Vec<TypeName>,
    pub type_params: Vec<String>,
    pub return_type: TypeName,
    pub is_static: bool,
    pub is_native: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeInfo {
    pub name: String,
    pub is_primitive: bool,
    pub is_static: bool,
    pub declared_supertype: Option<String>,
    pub members: Vec<MemberSig>,
    /// Constructor parameter types; `None` when the class declares no constructor.
    pub ctor_params: Option<Vec<TypeName>>,
    /// Defining file, `None` for built-in types.
    pub file: Option<usize>,
}

impl TypeInfo {
    pub fn member(&self, name: &str) -> Option<&MemberSig> {
        self.members.iter().find(|m| m.name == name)
    }
}

/// What an identifier, member access or call refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Local(TypeName),
    /// A field, with the class that declares it.
    Field {
        container: String,
        member: MemberSig,
        static_receiver: bool,
    },
    /// A method, with the class that declares it.
    Method {
        container: String,
        member: MemberSig,
        static_receiver: bool,
    },
    /// A class name used as a static receiver.
    Class(String),
    /// The isolator `recv._()`.
    Isolator,
    Type(TypeName),
}

/// Static type of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprType {
    Value(TypeName),
    Null,
    /// A bare class name; only valid as a static receiver.
    ClassRef(String),
    /// The expression already produced a diagnostic.
    Error,
}

impl ExprType {
    pub fn type_name(&self) -> Option<&TypeName> {
        match self {
            ExprType::Value(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    pub types: BTreeMap<String, TypeInfo>,
    pub resolutions: HashMap<NodeKey, Resolution>,
    pub expr_types: HashMap<NodeKey, ExprType>,
}

impl SymbolTable {
    pub fn type_info(&self, name: &str) -> Option<&TypeInfo> {
        self.types.get(name)
    }

    pub fn class_exists(&self, name: &str) -> bool {
        self.types.get(name).is_some_and(|t| !t.is_primitive && t.file.is_some())
    }

    /// The declared-supertype chain starting at `class` (inclusive).
    pub fn supertype_chain(&self, class: &str) -> Vec<String> {
        let mut chain = Vec::new();
        let mut current = Some(class.to_string());
        while let Some(name) = current {
            if chain.contains(&name) {
                break;
            }
            current = self.types.get(&name).and_then(|t| t.declared_supertype.clone());
            chain.push(name);
        }
        chain
    }

    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        self.supertype_chain(sub).iter().any(|c| c == sup)
    }

    /// Finds `name` on `class` or its supertypes; returns the declaring class.
    pub fn lookup_member(&self, class: &str, name: &str) -> Option<(&str, &MemberSig)> {
        for c in self.supertype_chain(class) {
            if let Some(info) = self.types.get(&c) {
                if let Some(m) = info.member(name) {
                    return Some((info.name.as_str(), m));
                }
            }
        }
        None
    }

    pub fn resolution(&self, file: usize, node: NodeId) -> Option<&Resolution> {
        self.resolutions.get(&NodeKey { file, node })
    }

    pub fn expr_type(&self, file: usize, node: NodeId) -> Option<&ExprType> {
        self.expr_types.get(&NodeKey { file, node })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Name,
    Type,
}

impl std::fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ErrorKind::Name => "name error",
            ErrorKind::Type => "type error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}:{line}:{col}: {kind}: {message}")]
pub struct SemanticError {
    pub kind: ErrorKind,
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl SemanticError {
    pub(crate) fn at(kind: ErrorKind, path: &str, span: Span, message: impl Into<String>) -> Self {
        Self { kind, path: path.to_string(), line: span.line, col: span.col, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("unit under test is empty")]
    Empty,
    #[error("unit class `{0}` is not declared in the program")]
    UnknownClass(String),
}
