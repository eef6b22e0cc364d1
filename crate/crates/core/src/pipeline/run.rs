// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::isolate::{isolate, Isolation};
use super::project::{LoadedProject, Project, ProjectError};
use crate::runtime::{EnvMode, Runtime};
use crate::testgen::{explore, Exploration, ExplorationConfig, ExploreError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub exploration: ExplorationConfig,
    pub run_plain: bool,
    pub run_isolated: bool,
    /// Environment mode of the plain arm.
    pub plain_env: EnvMode,
    /// Timed phases are measured this many times; the median is reported.
    pub repeat: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            exploration: ExplorationConfig::default(),
            run_plain: true,
            run_isolated: true,
            plain_env: EnvMode::Hostile,
            repeat: 1,
        }
    }
}

/// One row per entry method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportRow {
    pub project: String,
    pub entry: String,
    pub sc_plain: Option<f64>,
    pub bc_plain: Option<f64>,
    pub tc_plain: Option<usize>,
    pub sc_iso: Option<f64>,
    pub bc_iso: Option<f64>,
    pub tc_iso: Option<usize>,
    pub i_methods: usize,
    pub i_members: usize,
    pub t_transform: f64,
    pub t_code_gen: f64,
    pub t_type_check: f64,
    pub t_test_gen_plain: f64,
    pub t_test_gen_iso: f64,
    pub boundaries: usize,
    pub diagnostics: Vec<String>,
}

/// Everything produced for one project.
#[derive(Debug, Clone)]
pub struct ProjectRun {
    pub name: String,
    pub rows: Vec<ReportRow>,
    pub loaded: Option<LoadedProject>,
    pub isolation: Option<Isolation>,
    pub plain: Vec<Exploration>,
    pub isolated: Vec<Exploration>,
    /// Set when the project could not be read, parsed or resolved.
    pub error: Option<String>,
}

impl ProjectRun {
    /// True when every requested arm ran for every entry.
    pub fn is_clean(&self) -> bool {
        self.error.is_none() && self.rows.iter().all(|r| r.diagnostics.is_empty())
    }
}

fn median(mut xs: Vec<Duration>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort();
    xs[xs.len() / 2].as_secs_f64()
}

struct ArmResult {
    exploration: Result<Exploration, ExploreError>,
    time: f64,
}

fn run_arm(rt: &Runtime, entry: &str, lp: &LoadedProject, cfg: &ExplorationConfig, repeat: usize) -> ArmResult {
    let mut times = Vec::new();
    let mut result = None;
    for _ in 0..repeat.max(1) {
        let start = Instant::now();
        let r = explore(rt, entry, &lp.unit, cfg);
        times.push(start.elapsed());
        result = Some(r);
    }
    ArmResult { exploration: result.expect("at least one repetition"), time: median(times) }
}

/// Runs the isolation workflow and both test-generation arms for one project directory.
pub fn run_project(dir: &Path, manifest: Option<&Path>, config: &PipelineConfig) -> ProjectRun {
    let fallback = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let loaded = Project::read(dir, manifest).and_then(Project::load);
    match loaded {
        Ok(lp) => run_loaded(lp, config),
        Err(e) => failed(fallback, e),
    }
}

fn failed(name: String, e: ProjectError) -> ProjectRun {
    ProjectRun {
        name,
        rows: Vec::new(),
        loaded: None,
        isolation: None,
        plain: Vec::new(),
        isolated: Vec::new(),
        error: Some(e.to_string()),
    }
}

pub fn run_loaded(lp: LoadedProject, config: &PipelineConfig) -> ProjectRun {
    let name = lp.project.name.clone();
    let repeat = config.repeat.max(1);

    let mut isolation = None;
    let (mut t_tr, mut t_cg, mut t_tc) = (Vec::new(), Vec::new(), Vec::new());
    if config.run_isolated {
        for _ in 0..repeat {
            let iso = isolate(&lp.program, &lp.table, &lp.unit);
            t_tr.push(iso.t_transform);
            t_cg.push(iso.t_codegen);
            t_tc.push(iso.t_typecheck);
            isolation = Some(iso);
        }
    }
    let (t_transform, t_code_gen, t_type_check) = (median(t_tr), median(t_cg), median(t_tc));
    let (i_methods, i_members) =
        isolation.as_ref().map(|i| (i.transform.method_count(), i.transform.member_count())).unwrap_or_default();
    let iso_diags = isolation.as_ref().map(|i| i.diagnostics()).unwrap_or_default();

    let plain_cfg = ExplorationConfig {
        exec: crate::runtime::ExecConfig { env: config.plain_env, ..config.exploration.exec },
        ..config.exploration
    };
    let plain_rt = Runtime::new(&lp.program, &lp.table);
    let iso_rt = isolation.as_ref().filter(|i| i.is_success()).map(|i| {
        Runtime::new(i.program.as_ref().expect("isolated program"), i.table.as_ref().expect("isolated table"))
    });

    let mut rows = Vec::new();
    let mut plain = Vec::new();
    let mut isolated = Vec::new();
    for entry in &lp.entries {
        let mut row = ReportRow {
            project: name.clone(),
            entry: entry.clone(),
            sc_plain: None,
            bc_plain: None,
            tc_plain: None,
            sc_iso: None,
            bc_iso: None,
            tc_iso: None,
            i_methods,
            i_members,
            t_transform,
            t_code_gen,
            t_type_check,
            t_test_gen_plain: 0.0,
            t_test_gen_iso: 0.0,
            boundaries: 0,
            diagnostics: Vec::new(),
        };
        if config.run_plain {
            let arm = run_arm(&plain_rt, entry, &lp, &plain_cfg, repeat);
            row.t_test_gen_plain = arm.time;
            match arm.exploration {
                Ok(e) => {
                    row.sc_plain = Some(e.sc);
                    row.bc_plain = Some(e.bc);
                    row.tc_plain = Some(e.tests.len());
                    row.boundaries += e.boundaries.total();
                    plain.push(e);
                }
                Err(ExploreError::Infeasible { .. }) => {
                    row.sc_plain = Some(0.0);
                    row.bc_plain = Some(0.0);
                    row.tc_plain = Some(0);
                }
                Err(e) => row.diagnostics.push(format!("plain: {e}")),
            }
        }
        if config.run_isolated {
            match &iso_rt {
                Some(rt) => {
                    let arm = run_arm(rt, entry, &lp, &config.exploration, repeat);
                    row.t_test_gen_iso = arm.time;
                    match arm.exploration {
                        Ok(e) => {
                            row.sc_iso = Some(e.sc);
                            row.bc_iso = Some(e.bc);
                            row.tc_iso = Some(e.tests.len());
                            row.boundaries += e.boundaries.total();
                            isolated.push(e);
                        }
                        Err(ExploreError::Infeasible { .. }) => {
                            row.sc_iso = Some(0.0);
                            row.bc_iso = Some(0.0);
                            row.tc_iso = Some(0);
                        }
                        Err(e) => row.diagnostics.push(format!("isolated: {e}")),
                    }
                }
                None => row.diagnostics.extend(iso_diags.iter().cloned()),
            }
        }
        rows.push(row);
    }
    drop(iso_rt);
    drop(plain_rt);
    ProjectRun { name, rows, loaded: Some(lp), isolation, plain, isolated, error: None }
}

/// Runs every project in parallel on at most `jobs` threads; output order follows `dirs`.
pub fn run_corpus(dirs: &[std::path::PathBuf], config: &PipelineConfig, jobs: usize) -> Vec<ProjectRun> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| dirs.par_iter().map(|d| run_project(d, None, config)).collect())
}
