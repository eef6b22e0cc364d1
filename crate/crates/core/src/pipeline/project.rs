// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::{Program, SourceFile, SyntaxError};
use crate::semantics::{resolve, SemanticError, SymbolTable, UnitError, UnitSpec};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub unit: Vec<String>,
    /// `Class.method` names; empty means every non-native method of the unit.
    #[serde(default)]
    pub entry_methods: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid manifest: {source}")]
    Manifest { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Semantic(Vec<SemanticError>),
    #[error("{0}")]
    Unit(#[from] UnitError),
}

/// A directory of `.ul` sources plus its manifest.
#[derive(Debug, Clone)]
pub struct Project {
    pub name: String,
    pub files: Vec<SourceFile>,
    pub manifest: Manifest,
}

/// A project with its parsed and resolved program.
#[derive(Debug, Clone)]
pub struct LoadedProject {
    pub project: Project,
    pub program: Program,
    pub table: SymbolTable,
    pub unit: UnitSpec,
    pub entries: Vec<String>,
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> ProjectError + '_ {
    move |source| ProjectError::Io { path: path.to_path_buf(), source }
}

impl Project {
    /// Reads `dir/*.ul` in name order and the manifest at `manifest` (default `dir/manifest.json`).
    pub fn read(dir: &Path, manifest: Option<&Path>) -> Result<Project, ProjectError> {
        let manifest_path = manifest.map(Path::to_path_buf).unwrap_or_else(|| dir.join(MANIFEST_FILE));
        let text = fs::read_to_string(&manifest_path).map_err(io(&manifest_path))?;
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|source| ProjectError::Manifest { path: manifest_path.clone(), source })?;
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ul"))
            .collect();
        paths.sort();
        let mut files = Vec::new();
        for p in paths {
            let content = fs::read_to_string(&p).map_err(io(&p))?;
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            files.push(SourceFile::new(name, content));
        }
        let name = dir
            .canonicalize()
            .ok()
            .and_then(|d| d.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| dir.display().to_string());
        Ok(Project { name, files, manifest })
    }

    pub fn load(self) -> Result<LoadedProject, ProjectError> {
        let program = Program::parse_with_prelude(&self.files)?;
        let table = resolve(&program).map_err(ProjectError::Semantic)?;
        let unit = UnitSpec::new(self.manifest.unit.iter().cloned())?;
        unit.validate(&program)?;
        let entries = if self.manifest.entry_methods.is_empty() {
            let mut v = Vec::new();
            for tree in &program.trees {
                for c in tree.classes.iter().filter(|c| unit.contains(&c.name)) {
                    for m in c.methods().filter(|m| m.body.is_some()) {
                        v.push(format!("{}.{}", c.name, m.name));
                    }
                }
            }
            v
        } else {
            self.manifest.entry_methods.clone()
        };
        Ok(LoadedProject { project: self, program, table, unit, entries })
    }
}

/// Subdirectories of `root` that contain a manifest, in name order.
pub fn discover_projects(root: &Path) -> Result<Vec<PathBuf>, ProjectError> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(io(root))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.join(MANIFEST_FILE).is_file())
        .collect();
    dirs.sort();
    Ok(dirs)
}
