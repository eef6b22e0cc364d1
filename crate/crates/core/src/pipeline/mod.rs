// SPDX-License-Identifier: Apache-2.0

//! End-to-end isolation workflow, both test-generation arms and reporting.

mod isolate;
mod project;
mod report;
mod run;

pub use isolate::{isolate, Isolation};
pub use project::{discover_projects, LoadedProject, Manifest, Project, ProjectError, MANIFEST_FILE};
pub use report::{
    emit_fakes, emit_report, emit_tests, emit_transformed, summarize, to_csv, Comparison, EmitError, Summary,
    CSV_COLUMNS,
};
pub use run::{run_corpus, run_loaded, run_project, PipelineConfig, ProjectRun, ReportRow};
