// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::frontend::ast::TypeName;
use crate::semantics::{MemberAccessRecord, MemberKind};

/// Identifier of a generated fake member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MangledName {
    pub container: String,
    pub member: String,
    pub is_field: bool,
    pub is_static: bool,
    pub param_types: Vec<TypeName>,
    pub return_type: TypeName,
    pub callsite_index: usize,
}

impl MangledName {
    pub fn render(&self) -> String {
        let mut s = String::new();
        if self.is_field {
            s.push_str("Member");
        }
        // Static fakes already live in a per-container class.
        if self.is_static {
            s.push_str(&self.member);
        } else {
            s.push_str(&self.container);
            s.push_str(&upper_camel(&self.member));
        }
        for p in &self.param_types {
            s.push_str(p.clr_name());
        }
        s.push_str(self.return_type.clr_name());
        s.push('_');
        s.push_str(&self.callsite_index.to_string());
        s
    }
}

impl fmt::Display for MangledName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn mangle(record: &MemberAccessRecord) -> MangledName {
    MangledName {
        container: record.container.name.clone(),
        member: record.member.name.clone(),
        is_field: record.member.kind == MemberKind::Field,
        is_static: record.is_static(),
        param_types: record.member.param_types.clone(),
        return_type: record.member.return_type.clone(),
        callsite_index: record.callsite_index,
    }
}

fn upper_camel(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(
        container: &str,
        member: &str,
        is_field: bool,
        is_static: bool,
        params: Vec<TypeName>,
        ret: TypeName,
        idx: usize,
    ) -> String {
        MangledName {
            container: container.into(),
            member: member.into(),
            is_field,
            is_static,
            param_types: params,
            return_type: ret,
            callsite_index: idx,
        }
        .render()
    }

    #[test]
    fn renderings() {
        assert_eq!(name("External", "calc", false, false, vec![], TypeName::Int, 0), "ExternalCalcInt32_0");
        assert_eq!(name("External", "staticCalc", false, true, vec![], TypeName::Int, 2), "staticCalcInt32_2");
        assert_eq!(
            name("ProcessedTransfer", "IsSuccess", true, false, vec![], TypeName::Bool, 2),
            "MemberProcessedTransferIsSuccessBoolean_2"
        );
        assert_eq!(
            name(
                "TransferProcessor",
                "Process",
                false,
                false,
                vec![TypeName::Long, TypeName::Class("Account".into())],
                TypeName::Class("ProcessedTransfer".into()),
                1
            ),
            "TransferProcessorProcessInt64AccountProcessedTransfer_1"
        );
    }
}
