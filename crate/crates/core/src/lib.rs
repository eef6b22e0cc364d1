// SPDX-License-Identifier: Apache-2.0

//! Automated isolation of a unit under test from its external dependencies.

pub mod fakegen;
pub mod frontend;
pub mod pipeline;
pub mod runtime;
pub mod semantics;
pub mod testgen;
pub mod transform;
