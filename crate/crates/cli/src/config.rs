//! Experiment configuration file (TOML).
//!
//! ```toml
//! kind = "gcwm-analyze"
//! seed = 7
//! output_dir = "out/analyze"   # optional; `--out` overrides
//!
//! [model]
//! beta = [-3.0, 3.0]           # GCWM: β_1..β_K; ERGM: one per pattern graph
//! n = 100
//! # graphs = ["edge", "triangle"]   ERGM only
//! # family = "gcwm"                 defect only
//!
//! [run]
//! eta = 0.1
//! ```
//!
//! Unknown keys anywhere are errors. Every `[run]` key is optional and
//! only the keys listed for the experiment kind are accepted; see
//! [`Kind::run_keys`].

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    GcwmAnalyze,
    GcwmFkg,
    GcwmClt,
    ErgmAnalyze,
    ErgmSample,
    ErgmFkg,
    ErgmClt,
    Defect,
    Coupling,
    BoundEval,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::GcwmAnalyze,
        Kind::GcwmFkg,
        Kind::GcwmClt,
        Kind::ErgmAnalyze,
        Kind::ErgmSample,
        Kind::ErgmFkg,
        Kind::ErgmClt,
        Kind::Defect,
        Kind::Coupling,
        Kind::BoundEval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::GcwmAnalyze => "gcwm-analyze",
            Kind::GcwmFkg => "gcwm-fkg",
            Kind::GcwmClt => "gcwm-clt",
            Kind::ErgmAnalyze => "ergm-analyze",
            Kind::ErgmSample => "ergm-sample",
            Kind::ErgmFkg => "ergm-fkg",
            Kind::ErgmClt => "ergm-clt",
            Kind::Defect => "defect",
            Kind::Coupling => "coupling",
            Kind::BoundEval => "bound-eval",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Kind::GcwmAnalyze => "rate-function maximizers, stationary-point classification, phase bands and out-of-band decay",
            Kind::GcwmFkg => "lattice condition and local FKG scan for the (band-conditioned) GCWM",
            Kind::GcwmClt => "exact normal approximation of the phase magnetization over an N grid",
            Kind::ErgmAnalyze => "ERGM phases p*, σ_n², stationary-point classification and circulant Γ members",
            Kind::ErgmSample => "phase-conditioned Glauber sampler with edge-count trace",
            Kind::ErgmFkg => "lattice condition and local FKG scan for small ERGMs",
            Kind::ErgmClt => "MCMC normal approximation of edge and subgraph counts in an ERGM phase",
            Kind::Defect => "exact or sampled approximate-FKG defect of a phase measure",
            Kind::Coupling => "four-chain monotone coupling experiment against its analytic bounds",
            Kind::BoundEval => "evaluate the general covariance lower bound over a grid of horizons",
        }
    }

    /// Model family the kind works with, if fixed.
    pub fn family(self) -> Option<Family> {
        match self {
            Kind::GcwmAnalyze | Kind::GcwmFkg | Kind::GcwmClt | Kind::Coupling => Some(Family::Gcwm),
            Kind::ErgmAnalyze | Kind::ErgmSample | Kind::ErgmFkg | Kind::ErgmClt => Some(Family::Ergm),
            Kind::Defect | Kind::BoundEval => None,
        }
    }

    pub fn run_keys(self) -> &'static [&'static str] {
        match self {
            Kind::GcwmAnalyze => &["grid_size", "tol", "lemma_tol", "eta", "epsilon", "n_grid"],
            Kind::GcwmFkg => &["grid_size", "tol", "eta", "epsilon", "scan", "pairs"],
            Kind::GcwmClt => &["grid_size", "tol", "eta", "epsilon", "phase", "n_grid"],
            Kind::ErgmAnalyze => &["grid_size", "tol", "lemma_tol", "gamma_epsilon", "gamma_v_max"],
            Kind::ErgmSample => &["grid_size", "tol", "eta", "exact_mode_max_n", "phase", "steps", "record_every"],
            Kind::ErgmFkg => &["grid_size", "tol", "eta", "lambda_eta", "phase", "scan", "pairs"],
            Kind::ErgmClt => &[
                "grid_size",
                "tol",
                "eta",
                "exact_mode_max_n",
                "phase",
                "subgraph",
                "chains",
                "burn_in_sweeps",
                "pilot_sweeps",
                "samples",
            ],
            Kind::Defect => &["grid_size", "tol", "eta", "epsilon", "phase", "method", "pairs"],
            Kind::Coupling => &[
                "grid_size",
                "tol",
                "eta",
                "epsilon",
                "phase",
                "t",
                "replicas",
                "tilt_epsilon",
                "shift_rule",
                "contraction_reps",
                "alpha",
                "z_candidates",
                "pilot_runs",
            ],
            Kind::BoundEval => &["alpha", "t_grid", "alphabet_size", "mu_lambda_complement", "diameter"],
        }
    }

    pub fn model_keys(self) -> &'static [&'static str] {
        match self {
            Kind::GcwmAnalyze | Kind::GcwmFkg | Kind::Coupling => &["beta", "n"],
            Kind::GcwmClt => &["beta"],
            Kind::ErgmAnalyze | Kind::ErgmSample | Kind::ErgmFkg | Kind::ErgmClt => &["beta", "n", "graphs"],
            Kind::Defect => &["family", "beta", "n", "graphs"],
            Kind::BoundEval => &[],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gcwm,
    Ergm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scan {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectMethodChoice {
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftRuleChoice {
    Certified,
    Paper,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_eta: Option<f64>,
    /// Index into the strictly concave maximizers (default: the largest).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<Scan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<DefectMethodChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_v_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_mode_max_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_every: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in_sweeps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pilot_sweeps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilt_epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_rule: Option<ShiftRuleChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_candidates: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pilot_runs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet_size: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_lambda_complement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<u64>,
}

impl RunConfig {
    /// Names of the keys that are set.
    pub fn set_keys(&self) -> Vec<String> {
        match toml::Value::try_from(self) {
            Ok(toml::Value::Table(t)) => t.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }
}

impl ModelConfig {
    pub fn set_keys(&self) -> Vec<String> {
        match toml::Value::try_from(self) {
            Ok(toml::Value::Table(t)) => t.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub run: RunConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
