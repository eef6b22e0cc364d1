// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use std::path::PathBuf;

use isoforge::fakegen::basic_environment_source;
use isoforge::frontend::SourceFile;
use isoforge::pipeline::{discover_projects, LoadedProject, Manifest, Project};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn load_dir(dir: PathBuf) -> LoadedProject {
    Project::read(&dir, None).and_then(Project::load).unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
}

pub fn corpus(name: &str) -> LoadedProject {
    load_dir(corpus_dir().join(name))
}

pub fn corpus_projects() -> Vec<LoadedProject> {
    discover_projects(&corpus_dir()).unwrap().into_iter().map(load_dir).collect()
}

/// A single-file project whose unit is class `T`; `env` also declares `Env` and an empty `Fake`.
pub fn inline(src: &str, env: bool) -> LoadedProject {
    let mut files = vec![SourceFile::new("t.ul", src)];
    if env {
        files.push(SourceFile::new("Fake.ul", "class Fake { }"));
        files.push(SourceFile::new("Env.ul", basic_environment_source()));
    }
    let manifest = Manifest { unit: vec!["T".into()], entry_methods: Vec::new() };
    Project { name: "inline".into(), files, manifest }.load().unwrap()
}

pub mod fuzz {
    use isoforge::frontend::ast::TypeName;
    use isoforge::pipeline::{isolate, LoadedProject};
    use isoforge::runtime::{ChoiceValue, ExecConfig, ExecOutcome, Execution, Input, OracleScript, Runtime};
    use isoforge::testgen::input_columns;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_choice(rng: &mut ChaCha8Rng, ty: &TypeName) -> ChoiceValue {
        match ty {
            TypeName::Bool => ChoiceValue::Bool(rng.gen()),
            TypeName::String => ChoiceValue::Str(["", "x", "on"].choose(rng).unwrap().to_string()),
            TypeName::Int => ChoiceValue::Int(rng.gen::<i32>() as i64 % 2000),
            _ => ChoiceValue::Int(rng.gen_range(-2000..2000)),
        }
    }

    fn random_input(rng: &mut ChaCha8Rng, column: &[Input]) -> Input {
        let pick = column.choose(rng).cloned().unwrap_or(Input::Null);
        match pick {
            Input::Int(_) if rng.gen_bool(0.3) => Input::Int(rng.gen_range(-1000..1000)),
            other => other,
        }
    }

    /// Runs every entry of the isolated `p` `runs` times with random arguments and oracle scripts.
    pub fn isolated_executions(p: &LoadedProject, runs: usize, seed: u64) -> Vec<(String, Execution)> {
        let iso = isolate(&p.program, &p.table, &p.unit);
        let labels = iso.artifact.as_ref().unwrap().choice_labels.clone();
        let rt = Runtime::new(iso.program.as_ref().unwrap(), iso.table.as_ref().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for entry in &p.entries {
            let info = rt.entry(entry).unwrap();
            let (cols, _) = input_columns(&rt, &info, &p.unit);
            let split = if info.is_static { 0 } else { info.ctor_params.len() };
            for _ in 0..runs {
                let inputs: Vec<Input> = cols.iter().map(|c| random_input(&mut rng, c)).collect();
                let mut script = OracleScript::new();
                for l in &labels {
                    let n = rng.gen_range(0..4);
                    let vals = (0..n).map(|_| random_choice(&mut rng, &l.value_type)).collect();
                    script.insert(l.label.clone(), vals);
                }
                let ex = rt.execute(&info, &inputs[..split], &inputs[split..], &script, &ExecConfig::default());
                out.push((entry.clone(), ex));
            }
        }
        out
    }

    pub fn is_sound(ex: &Execution) -> bool {
        ex.side_effects.is_empty() && !matches!(ex.outcome, ExecOutcome::EnvFault { .. })
    }
}
