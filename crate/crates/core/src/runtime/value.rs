// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

pub type ObjId = u32;

/// Runtime value. `long` and `int` share the 64-bit integer representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
    Ref(ObjId),
    /// Allocated without running a constructor.
    Uninit(ObjId),
    /// Result of a `void` method.
    Void,
}

impl Value {
    pub fn object(&self) -> Option<ObjId> {
        match self {
            Value::Ref(id) | Value::Uninit(id) => Some(*id),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(s),
            Value::Null => f.write_str("null"),
            Value::Ref(id) => write!(f, "#{id}"),
            Value::Uninit(id) => write!(f, "#{id}?"),
            Value::Void => f.write_str("void"),
        }
    }
}

/// A concrete input a test supplies to an entry method or constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Input {
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
    /// A fresh uninitialized instance of the named class.
    Uninit(String),
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Int(v) => write!(f, "{v}"),
            Input::Bool(b) => write!(f, "{b}"),
            Input::Str(s) => write!(f, "{s:?}"),
            Input::Null => f.write_str("null"),
            Input::Uninit(c) => write!(f, "New<{c}>"),
        }
    }
}

/// A value the choice oracle hands to a fake.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChoiceValue {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl ChoiceValue {
    pub fn to_value(&self) -> Value {
        match self {
            ChoiceValue::Bool(b) => Value::Bool(*b),
            ChoiceValue::Int(v) => Value::Int(*v),
            ChoiceValue::Str(s) => Value::Str(s.clone()),
        }
    }
}
