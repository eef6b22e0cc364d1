// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use isoforge::pipeline::{
    discover_projects, emit_fakes, emit_report, emit_tests, emit_transformed, isolate, run_corpus, run_project,
    PipelineConfig, Project, ProjectRun, MANIFEST_FILE,
};
use isoforge::runtime::{EnvMode, ExecConfig, Runtime};
use isoforge::testgen::{replay, ExplorationConfig, GeneratedTest};

const EXIT_FAILURES: u8 = 2;
const EXIT_UNREADABLE: u8 = 1;

#[derive(Parser)]
#[command(name = "isoforge", version, about = "Isolate classes from their dependencies and generate unit tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate and generate tests for a project or a directory of projects.
    Run(RunArgs),
    /// Re-execute emitted tests and compare their outcomes.
    Replay(ReplayArgs),
    /// Transform a project and report diagnostics without generating tests.
    Check {
        dir: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// A project directory (with manifest.json) or a corpus root.
    dir: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, conflicts_with = "plain_only")]
    isolated_only: bool,
    #[arg(long)]
    plain_only: bool,
    /// Plain arm sees primitives that succeed with fixed defaults.
    #[arg(long)]
    permissive: bool,
    #[arg(long)]
    emit_transformed: bool,
    #[arg(long)]
    emit_fakes: bool,
    #[arg(long)]
    emit_tests: bool,
    /// Where emitted artifacts go.
    #[arg(long, default_value = "isoforge-out")]
    artifacts: PathBuf,
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, default_value_t = 64)]
    max_tests: usize,
    #[arg(long, default_value_t = 8)]
    max_choice_depth: usize,
    #[arg(long, default_value_t = 20_000)]
    max_runs: usize,
    /// Seconds per entry method and arm.
    #[arg(long, default_value_t = 10.0)]
    time_budget: f64,
    #[arg(long, default_value_t = 4)]
    jobs: usize,
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    dir: PathBuf,
    tests: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Replay against the isolated program.
    #[arg(long)]
    isolated: bool,
    #[arg(long)]
    permissive: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
        Command::Replay(args) => replay_cmd(args),
        Command::Check { dir, manifest } => check(&dir, manifest.as_deref()),
    }
}

fn env_mode(permissive: bool) -> EnvMode {
    if permissive {
        EnvMode::Permissive
    } else {
        EnvMode::Hostile
    }
}

fn run(a: RunArgs) -> ExitCode {
    let config = PipelineConfig {
        exploration: ExplorationConfig {
            max_tests: a.max_tests,
            max_choice_depth: a.max_choice_depth,
            max_runs: a.max_runs,
            time_budget: Duration::from_secs_f64(a.time_budget.max(0.0)),
            ..ExplorationConfig::default()
        },
        run_plain: !a.isolated_only,
        run_isolated: !a.plain_only,
        plain_env: env_mode(a.permissive),
        repeat: a.repeat,
    };

    let runs: Vec<ProjectRun> = if a.dir.join(MANIFEST_FILE).is_file() || a.manifest.is_some() {
        vec![run_project(&a.dir, a.manifest.as_deref(), &config)]
    } else {
        match discover_projects(&a.dir) {
            Ok(dirs) if !dirs.is_empty() => run_corpus(&dirs, &config, a.jobs),
            Ok(_) => {
                eprintln!("{}: no projects found", a.dir.display());
                return ExitCode::from(EXIT_UNREADABLE);
            }
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(EXIT_UNREADABLE);
            }
        }
    };

    for r in &runs {
        if let Some(e) = &r.error {
            eprintln!("{}: {e}", r.name);
        }
        let emitted = (|| {
            if a.emit_transformed {
                emit_transformed(r, &a.artifacts)?;
            }
            if a.emit_fakes {
                emit_fakes(r, &a.artifacts)?;
            }
            if a.emit_tests {
                emit_tests(r, &a.artifacts)?;
            }
            Ok::<_, isoforge::pipeline::EmitError>(())
        })();
        if let Err(e) = emitted {
            eprintln!("{e}");
            return ExitCode::from(EXIT_UNREADABLE);
        }
    }

    let summary = match emit_report(&runs, &a.out) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_UNREADABLE);
        }
    };
    println!("{summary}");
    println!("report: {}", a.out.display());

    if runs.len() == 1 && runs[0].loaded.is_none() {
        ExitCode::from(EXIT_UNREADABLE)
    } else if runs.iter().all(ProjectRun::is_clean) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURES)
    }
}

fn replay_cmd(a: ReplayArgs) -> ExitCode {
    let lp = match Project::read(&a.dir, a.manifest.as_deref()).and_then(Project::load) {
        Ok(lp) => lp,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_UNREADABLE);
        }
    };
    let tests: Vec<GeneratedTest> = match fs::read_to_string(&a.tests)
        .map_err(|e| e.to_string())
        .and_then(|s| serde_json::from_str(&s).map_err(|e| e.to_string()))
    {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", a.tests.display());
            return ExitCode::from(EXIT_UNREADABLE);
        }
    };
    let iso;
    let rt = if a.isolated {
        iso = isolate(&lp.program, &lp.table, &lp.unit);
        match (&iso.program, &iso.table) {
            (Some(p), Some(t)) if iso.is_success() => Runtime::new(p, t),
            _ => {
                for d in iso.diagnostics() {
                    eprintln!("{d}");
                }
                return ExitCode::from(EXIT_FAILURES);
            }
        }
    } else {
        Runtime::new(&lp.program, &lp.table)
    };
    let exec = ExecConfig { env: env_mode(a.permissive), ..ExecConfig::default() };
    let mut mismatches = 0;
    for (i, t) in tests.iter().enumerate() {
        match replay(&rt, t, &exec) {
            Ok((outcome, _)) if outcome == t.outcome => println!("#{i} {}: ok ({outcome})", t.entry),
            Ok((outcome, _)) => {
                mismatches += 1;
                println!("#{i} {}: expected {}, got {outcome}", t.entry, t.outcome);
            }
            Err(e) => {
                mismatches += 1;
                println!("#{i} {}: {e}", t.entry);
            }
        }
    }
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURES)
    }
}

fn check(dir: &Path, manifest: Option<&Path>) -> ExitCode {
    let lp = match Project::read(dir, manifest).and_then(Project::load) {
        Ok(lp) => lp,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_UNREADABLE);
        }
    };
    let iso = isolate(&lp.program, &lp.table, &lp.unit);
    println!(
        "{}: {} methods, {} members isolated",
        lp.project.name,
        iso.transform.method_count(),
        iso.transform.member_count()
    );
    if iso.is_success() {
        ExitCode::SUCCESS
    } else {
        for d in iso.diagnostics() {
            println!("{d}");
        }
        ExitCode::from(EXIT_FAILURES)
    }
}
