// SPDX-License-Identifier: Apache-2.0

mod common;

use std::fs;

use isoforge::pipeline::*;
use isoforge::runtime::{ExecConfig, Runtime};
use isoforge::testgen::{replay, GeneratedTest};

fn corpus_runs(config: &PipelineConfig) -> Vec<ProjectRun> {
    let dirs = discover_projects(&common::corpus_dir()).unwrap();
    run_corpus(&dirs, config, 4)
}

fn row<'a>(runs: &'a [ProjectRun], entry: &str) -> &'a ReportRow {
    runs.iter().flat_map(|r| &r.rows).find(|r| r.entry == entry).unwrap()
}

#[test]
fn transfer_row() {
    let runs = corpus_runs(&PipelineConfig::default());
    let r = row(&runs, "Bank.TransferMoney");
    assert_eq!((r.tc_plain, r.tc_iso), (Some(2), Some(4)));
    assert!(r.sc_plain.unwrap() < r.sc_iso.unwrap());
    assert_eq!(r.sc_iso, Some(100.0));
    assert_eq!((r.i_methods, r.i_members), (2, 1));
    assert!(r.diagnostics.is_empty());
}

#[test]
fn dependency_free_rows_are_equal() {
    let runs = corpus_runs(&PipelineConfig::default());
    for r in runs.iter().flat_map(|r| &r.rows).filter(|r| r.project == "pure_math") {
        assert_eq!(r.sc_plain, r.sc_iso);
        assert_eq!(r.bc_plain, r.bc_iso);
        assert_eq!((r.i_methods, r.i_members), (0, 0));
    }
}

#[test]
fn report_rows_are_well_formed() {
    let runs = corpus_runs(&PipelineConfig::default());
    assert!(runs.iter().all(ProjectRun::is_clean));
    let rows: Vec<_> = runs.iter().flat_map(|r| r.rows.iter().cloned()).collect();
    assert!(rows.len() >= 12);
    for r in &rows {
        for v in [r.sc_plain, r.bc_plain, r.sc_iso, r.bc_iso].into_iter().flatten() {
            assert!((0.0..=100.0).contains(&v));
        }
        for t in [r.t_transform, r.t_code_gen, r.t_type_check, r.t_test_gen_plain, r.t_test_gen_iso] {
            assert!(t >= 0.0);
        }
    }
    // isolation counts are per class
    for run in &runs {
        let counts: Vec<_> = run.rows.iter().map(|r| (r.i_methods, r.i_members)).collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{}", run.name);
    }
    let s = summarize(&rows);
    assert_eq!(s.statement.total(), s.compared);
    assert_eq!(s.branch.total(), s.compared);
    assert_eq!(s.compared, rows.len());
}

#[test]
fn external_operator_fails_isolation_but_keeps_plain_arm() {
    let run = run_project(&common::fixtures_dir().join("external_operator"), None, &PipelineConfig::default());
    assert!(run.error.is_none());
    let r = &run.rows[0];
    assert!(!r.diagnostics.is_empty());
    assert!(r.diagnostics[0].contains("Ledger.ul:3:13"), "{:?}", r.diagnostics);
    assert_eq!((r.sc_iso, r.tc_iso), (None, None));
    assert!(r.sc_plain.is_some());
    assert!(!run.is_clean());
}

#[test]
fn unreadable_project_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_project(dir.path(), None, &PipelineConfig::default());
    assert!(run.error.is_some());
    assert!(run.rows.is_empty());

    fs::write(dir.path().join("manifest.json"), r#"{ "unit": ["A"] }"#).unwrap();
    fs::write(dir.path().join("a.ul"), "class A { int f( }").unwrap();
    let run = run_project(dir.path(), None, &PipelineConfig::default());
    assert!(run.error.as_deref().unwrap().contains("a.ul:1:"));
}

#[test]
fn empty_corpus_gives_header_only_csv() {
    let csv = to_csv(&[]);
    assert_eq!(csv.trim_end(), CSV_COLUMNS.join(","));
}

#[test]
fn emitted_report_has_one_row_per_entry() {
    let runs = corpus_runs(&PipelineConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let summary = emit_report(&runs, &out).unwrap();
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    assert_eq!(lines.count(), summary.rows);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), summary.rows);
    assert!(json["rows"][0]["scPlain"].is_number());
}

#[test]
fn single_arm_runs() {
    let config = PipelineConfig { run_isolated: false, ..PipelineConfig::default() };
    let run = run_project(&common::corpus_dir().join("transfer"), None, &config);
    assert!(run.isolation.is_none());
    assert_eq!(run.rows[0].sc_iso, None);
    assert_eq!(run.rows[0].tc_plain, Some(2));

    let config = PipelineConfig { run_plain: false, ..PipelineConfig::default() };
    let run = run_project(&common::corpus_dir().join("transfer"), None, &config);
    assert_eq!(run.rows[0].sc_plain, None);
    assert_eq!(run.rows[0].tc_iso, Some(4));
}

#[test]
fn repetition_does_not_change_coverage() {
    let one = run_project(&common::corpus_dir().join("transfer"), None, &PipelineConfig::default());
    let three = run_project(
        &common::corpus_dir().join("transfer"),
        None,
        &PipelineConfig { repeat: 3, ..PipelineConfig::default() },
    );
    let key = |r: &ReportRow| (r.sc_plain, r.bc_plain, r.tc_plain, r.sc_iso, r.bc_iso, r.tc_iso);
    assert_eq!(key(&one.rows[0]), key(&three.rows[0]));
}

#[test]
fn emitted_artifacts_replay() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_project(&common::corpus_dir().join("transfer"), None, &PipelineConfig::default());
    emit_transformed(&run, dir.path()).unwrap();
    emit_fakes(&run, dir.path()).unwrap();
    emit_tests(&run, dir.path()).unwrap();
    let base = dir.path().join("transfer");
    for f in ["Bank.ul", "Fake.ul", "FAKE_DB.ul", "Env.ul"] {
        assert!(base.join(f).is_file(), "{f}");
    }

    let lp = run.loaded.as_ref().unwrap();
    let iso = run.isolation.as_ref().unwrap();
    let rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
    let text = fs::read_to_string(base.join("isolated/Bank.TransferMoney.json")).unwrap();
    let tests: Vec<GeneratedTest> = serde_json::from_str(&text).unwrap();
    assert_eq!(tests.len(), 4);
    for t in &tests {
        let (outcome, cov) = replay(&rt, t, &ExecConfig::default()).unwrap();
        assert_eq!(outcome, t.outcome);
        assert_eq!(cov, t.coverage);
    }
    let plain = Runtime::new(&lp.program, &lp.table);
    let text = fs::read_to_string(base.join("plain/Bank.TransferMoney.json")).unwrap();
    let tests: Vec<GeneratedTest> = serde_json::from_str(&text).unwrap();
    for t in &tests {
        assert_eq!(replay(&plain, t, &ExecConfig::default()).unwrap().0, t.outcome);
    }
}
