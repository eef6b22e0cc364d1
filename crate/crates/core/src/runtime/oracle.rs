// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::value::ChoiceValue;

/// Label-keyed queues of scripted values, as serialized in test files.
pub type OracleScript = BTreeMap<String, Vec<ChoiceValue>>;

/// Supplies values at labeled choice points and logs every consumption.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceOracle {
    script: BTreeMap<String, VecDeque<ChoiceValue>>,
    log: Vec<(String, ChoiceValue)>,
}

impl ChoiceOracle {
    pub fn new(script: &OracleScript) -> Self {
        Self { script: script.iter().map(|(k, v)| (k.clone(), v.iter().cloned().collect())).collect(), log: Vec::new() }
    }

    /// Next scripted value for `label`; `None` once the queue is exhausted.
    pub fn next(&mut self, label: &str) -> Option<ChoiceValue> {
        let v = self.script.get_mut(label)?.pop_front()?;
        self.log.push((label.to_string(), v.clone()));
        Some(v)
    }

    pub fn log(&self) -> &[(String, ChoiceValue)] {
        &self.log
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        let script: OracleScript = serde_json::from_str(text)?;
        Ok(Self::new(&script))
    }
}
