//! Config-driven experiment runner.
//!
//! A run reads one JSON config, executes its task through the library and
//! writes a report table (`<task>.csv` or `<task>.json`) plus `manifest.json`
//! into the output directory. Exit codes: 0 on success, 2 when a declared
//! tolerance is violated, 1 on configuration or runtime errors.

pub mod config;
pub mod report;
pub mod tasks;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format, Task};
use crate::report::Table;
use crate::tasks::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Library(#[from] lieharm::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lieharm", version, about = "Run a harmonic-analysis experiment from a JSON config")]
pub struct Args {
    /// Experiment config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides a tolerance, e.g. `--tol plancherel=1e-12`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,
    /// Records wall time in the manifest (breaks byte-identical reruns).
    #[arg(long)]
    pub timing: bool,
}

/// Summary of a finished run.
#[derive(Debug)]
pub struct RunResult {
    pub exit_code: i32,
    pub report: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub outcome: Outcome,
}

/// Config after command-line overrides.
pub fn resolve_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output = out.clone();
    }
    for tol in &args.tolerances {
        config.override_tolerance(tol)?;
    }
    config.validate()?;
    Ok(config)
}

/// SHA-256 of the canonical config text, leaving out the output location.
pub fn inputs_digest(config: &ExperimentConfig) -> String {
    let mut inputs = config.clone();
    inputs.output = PathBuf::new();
    let text = serde_json::to_string(&inputs).expect("config serializes");
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

pub fn run(args: &Args) -> RunResult {
    let config = match resolve_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return RunResult { exit_code: EXIT_ERROR, report: None, manifest: None, outcome: Outcome::default() };
        }
    };
    run_config(&config, args.timing)
}

pub fn run_config(config: &ExperimentConfig, timing: bool) -> RunResult {
    let start = Instant::now();
    let digest = inputs_digest(config);
    let task = config.task;
    let mut table = Table::new(task.name(), &digest, tasks::columns(task));
    let mut outcome = Outcome::default();
    let result = tasks::run_task(config, &mut table, &mut outcome);
    let failure = result.err();
    if let Some(e) = &failure {
        eprintln!("{e}");
        table.push_failure(&e.to_string());
    }
    let elapsed = timing.then(|| start.elapsed().as_secs_f64());

    let fail = |outcome| RunResult { exit_code: EXIT_ERROR, report: None, manifest: None, outcome };
    if let Err(e) = std::fs::create_dir_all(&config.output) {
        eprintln!("{}: {e}", config.output.display());
        return fail(outcome);
    }
    let ext = match config.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let report = config.output.join(format!("{}.{ext}", task.name()));
    if let Err(e) = table.emit(&report, config.format) {
        eprintln!("{e}");
        return fail(outcome);
    }
    let status = match (&failure, outcome.violations.is_empty()) {
        (Some(_), _) => "failed",
        (None, false) => "tolerance-violated",
        (None, true) => "ok",
    };
    let manifest = config.output.join("manifest.json");
    let text = manifest_json(config, &digest, status, &report, &outcome, failure.as_ref(), elapsed);
    if let Err(e) = std::fs::write(&manifest, text) {
        eprintln!("{}: {e}", manifest.display());
        return fail(outcome);
    }
    for v in &outcome.violations {
        eprintln!("tolerance violated: {v}");
    }
    let exit_code = match status {
        "ok" => EXIT_OK,
        "tolerance-violated" => EXIT_TOLERANCE,
        _ => EXIT_ERROR,
    };
    RunResult { exit_code, report: Some(report), manifest: Some(manifest), outcome }
}

fn manifest_json(
    config: &ExperimentConfig,
    digest: &str,
    status: &str,
    report: &std::path::Path,
    outcome: &Outcome,
    failure: Option<&CliError>,
    elapsed: Option<f64>,
) -> String {
    let summary: Map<String, Value> = outcome
        .summary
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number)))
        .collect();
    let mut m = json!({
        "config": config,
        "seed": config.seed,
        "digest": digest,
        "task": config.task.name(),
        "status": status,
        "library_version": lieharm::VERSION,
        "runner_version": env!("CARGO_PKG_VERSION"),
        "report": report.file_name().map(|n| n.to_string_lossy().into_owned()),
        "summary": summary,
        "violations": outcome.violations,
    });
    if let Some(e) = failure {
        m["error"] = Value::String(e.to_string());
    }
    if config.task == Task::BoundSweep {
        m["note"] = Value::String("ratios are empirical lower bounds for operator norms".into());
    }
    if let Some(t) = elapsed {
        m["wall_time_s"] = json!(t);
    }
    serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"
}
