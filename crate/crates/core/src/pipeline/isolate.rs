// SPDX-License-Identifier: Apache-2.0

use std::time::{Duration, Instant};

use crate::fakegen::{generate_fake_code, FakeArtifact, FakeGenError};
use crate::frontend::Program;
use crate::semantics::{resolve, SemanticError, SymbolTable, UnitSpec};
use crate::transform::{transform_member_accesses, transform_object_creations, TransformResult};

/// Output of the isolation workflow for one unit.
#[derive(Debug, Clone)]
pub struct Isolation {
    pub transform: TransformResult,
    pub artifact: Option<FakeArtifact>,
    /// Transformed program with generated trees installed; `None` on failure.
    pub program: Option<Program>,
    pub table: Option<SymbolTable>,
    pub fakegen_error: Option<FakeGenError>,
    /// Errors from re-checking the isolated program.
    pub type_errors: Vec<SemanticError>,
    pub t_transform: Duration,
    pub t_codegen: Duration,
    pub t_typecheck: Duration,
}

impl Isolation {
    pub fn is_success(&self) -> bool {
        self.transform.is_success && self.fakegen_error.is_none() && self.type_errors.is_empty() && self.table.is_some()
    }

    /// Human-readable reasons the isolated program is unavailable.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out: Vec<String> = self.transform.diagnostics.iter().map(|d| d.to_string()).collect();
        out.extend(self.fakegen_error.iter().map(|e| e.to_string()));
        out.extend(self.type_errors.iter().map(|e| e.to_string()));
        out
    }
}

/// Transforms member accesses and object creations of `unit`, generates
/// fakes and the environment, installs them and type-checks the result.
pub fn isolate(program: &Program, table: &SymbolTable, unit: &UnitSpec) -> Isolation {
    let start = Instant::now();
    let ti = transform_member_accesses(program, table, unit);
    let to = transform_object_creations(ti, unit);
    let t_transform = start.elapsed();

    let mut iso = Isolation {
        transform: to,
        artifact: None,
        program: None,
        table: None,
        fakegen_error: None,
        type_errors: Vec::new(),
        t_transform,
        t_codegen: Duration::ZERO,
        t_typecheck: Duration::ZERO,
    };
    if !iso.transform.is_success {
        return iso;
    }

    let start = Instant::now();
    let artifact = generate_fake_code(&iso.transform.records, Some(table));
    let artifact = match artifact {
        Ok(a) => a,
        Err(e) => {
            iso.fakegen_error = Some(e);
            iso.t_codegen = start.elapsed();
            return iso;
        }
    };
    let mut isolated = iso.transform.program.clone();
    artifact.install(&mut isolated);
    iso.t_codegen = start.elapsed();

    let start = Instant::now();
    match resolve(&isolated) {
        Ok(t) => iso.table = Some(t),
        Err(errs) => iso.type_errors = errs,
    }
    iso.t_typecheck = start.elapsed();
    iso.artifact = Some(artifact);
    iso.program = Some(isolated);
    iso
}
