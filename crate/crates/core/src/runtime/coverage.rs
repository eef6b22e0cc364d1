// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::frontend::ast::NodeId;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodCoverage {
    pub statements_total: usize,
    pub statements_hit: BTreeSet<NodeId>,
    pub branches_total: usize,
    pub edges_hit: BTreeSet<(NodeId, bool)>,
    pub entered: bool,
}

impl MethodCoverage {
    pub fn empty(statements_total: usize, if_count: usize) -> Self {
        Self { statements_total, branches_total: 2 * if_count, ..Self::default() }
    }

    /// Statement and branch coverage in percent.
    pub fn percentages(&self) -> (f64, f64) {
        let sc = if self.statements_total == 0 {
            if self.entered {
                100.0
            } else {
                0.0
            }
        } else {
            100.0 * self.statements_hit.len() as f64 / self.statements_total as f64
        };
        let bc = if self.branches_total == 0 {
            if self.entered {
                100.0
            } else {
                0.0
            }
        } else {
            100.0 * self.edges_hit.len() as f64 / self.branches_total as f64
        };
        (sc, bc)
    }

    pub fn merge(&mut self, other: &MethodCoverage) {
        self.statements_hit.extend(other.statements_hit.iter().copied());
        self.edges_hit.extend(other.edges_hit.iter().copied());
        self.entered |= other.entered;
    }

    /// True when `other` hits something `self` does not.
    pub fn adds(&self, other: &MethodCoverage) -> bool {
        (other.entered && !self.entered)
            || !other.statements_hit.is_subset(&self.statements_hit)
            || !other.edges_hit.is_subset(&self.edges_hit)
    }
}

/// Coverage keyed by `Class.method` (`Class.<ctor>` for constructors).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageMap {
    pub methods: BTreeMap<String, MethodCoverage>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("method `{0}` is not instrumented")]
pub struct UnknownMethod(pub String);

impl CoverageMap {
    pub fn method(&self, key: &str) -> Option<&MethodCoverage> {
        self.methods.get(key)
    }

    pub fn merge(&mut self, other: &CoverageMap) {
        for (k, v) in &other.methods {
            match self.methods.get_mut(k) {
                Some(m) => m.merge(v),
                None => {
                    self.methods.insert(k.clone(), v.clone());
                }
            }
        }
    }

    pub fn coverage(&self, key: &str) -> Result<(f64, f64), UnknownMethod> {
        self.methods.get(key).map(|m| m.percentages()).ok_or_else(|| UnknownMethod(key.to_string()))
    }
}
