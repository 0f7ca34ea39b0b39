//! Config-driven experiment runner for the `phasefkg` toolkit.
//!
//! A run reads a TOML config ([`config`]), validates it and fills defaults
//! ([`validate`]), dispatches to one experiment ([`experiments`]) and writes
//! an output bundle ([`output`]).

pub mod config;
pub mod experiments;
pub mod output;
pub mod validate;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use config::ExperimentConfig;
use output::Bundle;
use validate::Diagnostic;

#[derive(Debug)]
pub enum CliError {
    /// The config failed to parse or validate.
    Validation(Vec<Diagnostic>),
    /// The library refused the input.
    Invalid(String),
    /// The library rejected the model or run (critical phase, empty band, ...).
    Rejected(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Invalid(_) => 2,
            CliError::Rejected(_) => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(d) => {
                write!(f, "invalid config:")?;
                for x in d {
                    write!(f, "\n  {x}")?;
                }
                Ok(())
            }
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Rejected(m) => write!(f, "rejected: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<phasefkg::Error> for CliError {
    fn from(e: phasefkg::Error) -> Self {
        match e {
            phasefkg::Error::InvalidInput(m) => CliError::Invalid(m),
            phasefkg::Error::Rejected(m) => CliError::Rejected(m),
            phasefkg::Error::Internal(m) => CliError::Internal(m),
        }
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::parse(&text).map_err(|m| CliError::Validation(vec![Diagnostic { field: "config".into(), message: m }]))
}

/// Bundle directory: `out`, else the config's `output_dir`, else
/// `output/<kind>-<seed>`.
pub fn output_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    match (out, &cfg.output_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => p.clone(),
        (None, None) => PathBuf::from("output").join(format!("{}-{}", cfg.kind, cfg.seed)),
    }
}

/// Resolves, runs and renders a config without writing anything. Returns
/// the summary and the bundle files.
pub fn render(cfg: &ExperimentConfig) -> Result<(serde_json::Value, Vec<(String, String)>), CliError> {
    let resolved = validate::resolve(cfg).map_err(CliError::Validation)?;
    let art = experiments::run_experiment(&resolved)?;
    // The output location is left out so bundles do not depend on it.
    let echoed = ExperimentConfig { output_dir: None, ..resolved.config.clone() };
    Ok(output::render_files(cfg.kind.name(), cfg.seed, &echoed.to_toml(), &art))
}

pub fn run(mut cfg: ExperimentConfig, seed: Option<u64>, out: Option<&Path>) -> Result<Bundle, CliError> {
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = output_dir(&cfg, out);
    let (summary, files) = render(&cfg)?;
    output::write_bundle(&dir, &files, summary).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}
