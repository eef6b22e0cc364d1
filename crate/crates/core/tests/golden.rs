// SPDX-License-Identifier: Apache-2.0

//! Printed trees compared against checked-in files. Set `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::fs;
use std::path::{Path, PathBuf};

use isoforge::frontend::{pretty_print, Program, SourceFile};
use isoforge::pipeline::isolate;
use isoforge::semantics::{resolve, UnitSpec};
use isoforge::transform::transform;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{} differs", path.display());
}

fn ul_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ul"))
        .collect();
    v.sort();
    v
}

#[test]
fn dependency_free_classes_are_unchanged() {
    let files = ul_files(&common::fixtures_dir().join("identity"));
    assert!(files.len() >= 3);
    for path in files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let src = SourceFile::new(name.clone(), fs::read_to_string(&path).unwrap());
        let program = Program::parse_with_prelude(&[src]).unwrap();
        let table = resolve(&program).unwrap();
        let tree = program.tree(&name).unwrap();
        let unit = UnitSpec::new(tree.classes.iter().map(|c| c.name.clone())).unwrap();

        let result = transform(&program, &table, &unit);
        assert!(result.is_success);
        assert!(result.records.is_empty() && result.creations.is_empty(), "{name}");
        let after = result.program.tree(&name).unwrap();
        assert_eq!(after.structure(), tree.structure(), "{name}");
        check_golden(&golden_dir().join("identity").join(&name), &pretty_print(after));
    }
}

#[test]
fn transformed_corpus_matches_golden() {
    for p in common::corpus_projects() {
        let iso = isolate(&p.program, &p.table, &p.unit);
        assert!(iso.is_success(), "{}: {:?}", p.project.name, iso.diagnostics());
        let dir = golden_dir().join("transformed").join(&p.project.name);
        let mut seen = Vec::new();
        for tree in iso.transform.trees().chain(iso.artifact.as_ref().unwrap().trees()) {
            check_golden(&dir.join(&tree.path), &pretty_print(tree));
            seen.push(tree.path.clone());
        }
        if std::env::var_os("UPDATE_GOLDEN").is_none() {
            let mut on_disk: Vec<String> =
                ul_files(&dir).iter().map(|f| f.file_name().unwrap().to_string_lossy().into_owned()).collect();
            on_disk.sort();
            seen.sort();
            assert_eq!(seen, on_disk, "{}", p.project.name);
        }
    }
}
