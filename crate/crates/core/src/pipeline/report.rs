// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::run::{ProjectRun, ReportRow};
use crate::frontend::pretty_print;

pub const CSV_COLUMNS: [&str; 17] = [
    "project",
    "entry",
    "scPlain",
    "bcPlain",
    "tcPlain",
    "scIso",
    "bcIso",
    "tcIso",
    "iMethods",
    "iMembers",
    "tTransform",
    "tCodeGen",
    "tTypeCheck",
    "tTestGenPlain",
    "tTestGenIso",
    "boundaries",
    "diagnostics",
];

#[derive(Debug, Error)]
#[error("{path}: {source}")]
pub struct EmitError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn emit_err(path: &Path) -> impl FnOnce(io::Error) -> EmitError + '_ {
    move |source| EmitError { path: path.to_path_buf(), source }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), EmitError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(emit_err(parent))?;
    }
    fs::write(path, contents).map_err(emit_err(path))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in rows {
        let rec = [
            r.project.clone(),
            r.entry.clone(),
            opt(r.sc_plain),
            opt(r.bc_plain),
            opt(r.tc_plain),
            opt(r.sc_iso),
            opt(r.bc_iso),
            opt(r.tc_iso),
            r.i_methods.to_string(),
            r.i_members.to_string(),
            format!("{:.6}", r.t_transform),
            format!("{:.6}", r.t_code_gen),
            format!("{:.6}", r.t_type_check),
            format!("{:.6}", r.t_test_gen_plain),
            format!("{:.6}", r.t_test_gen_iso),
            r.boundaries.to_string(),
            r.diagnostics.join("; "),
        ];
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub improved: usize,
    pub equal: usize,
    pub regressed: usize,
}

impl Comparison {
    fn add(&mut self, plain: f64, iso: f64) {
        if iso > plain + 1e-9 {
            self.improved += 1;
        } else if plain > iso + 1e-9 {
            self.regressed += 1;
        } else {
            self.equal += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.improved + self.equal + self.regressed
    }
}

/// Plain-vs-isolated comparison over rows where both arms produced coverage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub compared: usize,
    pub failed: usize,
    pub statement: Comparison,
    pub branch: Comparison,
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let mut s = Summary { rows: rows.len(), ..Summary::default() };
    for r in rows {
        if !r.diagnostics.is_empty() {
            s.failed += 1;
        }
        if let (Some(sp), Some(si), Some(bp), Some(bi)) = (r.sc_plain, r.sc_iso, r.bc_plain, r.bc_iso) {
            s.compared += 1;
            s.statement.add(sp, si);
            s.branch.add(bp, bi);
        }
    }
    s
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "methods: {} ({} compared, {} with failures)", self.rows, self.compared, self.failed)?;
        writeln!(
            f,
            "statement coverage: {} improved, {} equal, {} regressed",
            self.statement.improved, self.statement.equal, self.statement.regressed
        )?;
        write!(
            f,
            "branch coverage:    {} improved, {} equal, {} regressed",
            self.branch.improved, self.branch.equal, self.branch.regressed
        )
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [ReportRow],
    summary: Summary,
    errors: Vec<(&'a str, &'a str)>,
}

/// Writes `path` as CSV and a sibling `.json` with rows, summary and load errors.
pub fn emit_report(runs: &[ProjectRun], path: &Path) -> Result<Summary, EmitError> {
    let rows: Vec<ReportRow> = runs.iter().flat_map(|r| r.rows.iter().cloned()).collect();
    let summary = summarize(&rows);
    write(path, to_csv(&rows))?;
    let errors = runs.iter().filter_map(|r| r.error.as_deref().map(|e| (r.name.as_str(), e))).collect();
    let json = serde_json::to_string_pretty(&JsonReport { rows: &rows, summary, errors }).expect("serializable");
    write(&path.with_extension("json"), json)?;
    Ok(summary)
}

/// Pretty-printed transformed unit files under `dir/<project>/`.
pub fn emit_transformed(run: &ProjectRun, dir: &Path) -> Result<(), EmitError> {
    let Some(iso) = &run.isolation else { return Ok(()) };
    for tree in iso.transform.trees() {
        write(&dir.join(&run.name).join(&tree.path), pretty_print(tree))?;
    }
    Ok(())
}

/// `Fake.ul`, `FAKE_<C>.ul` and `Env.ul` under `dir/<project>/`.
pub fn emit_fakes(run: &ProjectRun, dir: &Path) -> Result<(), EmitError> {
    let Some(artifact) = run.isolation.as_ref().and_then(|i| i.artifact.as_ref()) else { return Ok(()) };
    for tree in artifact.trees() {
        write(&dir.join(&run.name).join(&tree.path), pretty_print(tree))?;
    }
    Ok(())
}

/// Generated tests as `dir/<project>/{plain,isolated}/<entry>.json`.
pub fn emit_tests(run: &ProjectRun, dir: &Path) -> Result<(), EmitError> {
    for (arm, explorations) in [("plain", &run.plain), ("isolated", &run.isolated)] {
        for e in explorations {
            let json = serde_json::to_string_pretty(&e.tests).expect("serializable");
            write(&dir.join(&run.name).join(arm).join(format!("{}.json", e.entry)), json)?;
        }
    }
    Ok(())
}
