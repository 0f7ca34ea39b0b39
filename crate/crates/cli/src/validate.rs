//! Static validation and default resolution. Nothing here simulates; the
//! only numerical work is the rate-function analysis needed to check that
//! phase bands are well defined and disjoint.

use std::fmt;

use phasefkg::ergm::{check_balls_disjoint, edge_count_of, CutBall, ErgmRateAnalysis, ErgmSpec, SmallGraph};
use phasefkg::gcwm::{check_bands_disjoint, ferromagnetic_violation, GcwmParams, PhaseBand};
use phasefkg::rate::RateAnalysis;
use serde::Serialize;

use crate::config::*;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone)]
pub enum ModelPlan {
    Gcwm { params: GcwmParams, analysis: RateAnalysis },
    /// GCWM shape for an N grid (gcwm-clt); `params.n` is a placeholder.
    GcwmGrid { params: GcwmParams, analysis: RateAnalysis },
    Ergm { spec: ErgmSpec, analysis: ErgmRateAnalysis },
    None,
}

/// A validated config with every default filled in.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub model: ModelPlan,
}

impl Resolved {
    pub fn run(&self) -> &RunConfig {
        &self.config.run
    }

    /// Phase bands around every strictly concave maximizer (GCWM).
    pub fn bands(&self) -> Vec<PhaseBand> {
        let r = self.run();
        match &self.model {
            ModelPlan::Gcwm { analysis, .. } | ModelPlan::GcwmGrid { analysis, .. } => analysis
                .strictly_concave_maximizers
                .iter()
                .map(|&m| PhaseBand::new(m, r.eta.unwrap(), r.epsilon.unwrap()).expect("validated band"))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The selected phase: m* for a GCWM, p* for an ERGM.
    pub fn phase_value(&self) -> f64 {
        let i = self.run().phase.unwrap_or(0);
        match &self.model {
            ModelPlan::Gcwm { analysis, .. } | ModelPlan::GcwmGrid { analysis, .. } => analysis.strictly_concave_maximizers[i],
            ModelPlan::Ergm { analysis, .. } => analysis.phases[i].p_star,
            ModelPlan::None => f64::NAN,
        }
    }
}

struct Diags(Vec<Diagnostic>);

impl Diags {
    fn push(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(Diagnostic { field: field.to_string(), message: message.into() });
    }
}

/// Diagnostics for a config file's text; empty when it is valid.
pub fn validate_text(text: &str) -> Vec<Diagnostic> {
    match ExperimentConfig::parse(text) {
        Ok(cfg) => validate(&cfg),
        Err(e) => vec![Diagnostic { field: "config".into(), message: e }],
    }
}

pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    match resolve(cfg) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

pub fn resolve(cfg: &ExperimentConfig) -> Result<Resolved, Vec<Diagnostic>> {
    let mut d = Diags(Vec::new());
    let kind = cfg.kind;
    for k in cfg.model.set_keys() {
        if !kind.model_keys().contains(&k.as_str()) {
            d.push(&format!("model.{k}"), format!("not used by kind {kind}"));
        }
    }
    for k in cfg.run.set_keys() {
        if !kind.run_keys().contains(&k.as_str()) {
            d.push(&format!("run.{k}"), format!("not used by kind {kind}"));
        }
    }
    let mut run = cfg.run.clone();
    let grid_size = *run.grid_size.get_or_insert(10_000);
    let tol = *run.tol.get_or_insert(1e-10);
    if grid_size < 10 {
        d.push("run.grid_size", "must be at least 10");
    }
    if !(tol > 0.0 && tol < 1e-2) {
        d.push("run.tol", "must lie in (0, 1e-2)");
    }
    let family = match kind.family() {
        Some(f) => Some(f),
        None if kind == Kind::Defect => match cfg.model.family {
            Some(f) => Some(f),
            None => {
                d.push("model.family", "required for kind defect (\"gcwm\" or \"ergm\")");
                None
            }
        },
        None => None,
    };
    let model = match family {
        Some(Family::Gcwm) => resolve_gcwm(cfg, &mut run, &mut d),
        Some(Family::Ergm) => resolve_ergm(cfg, &mut run, &mut d),
        None => ModelPlan::None,
    };
    if !matches!(model, ModelPlan::None) || family.is_none() {
        resolve_kind(cfg, &model, &mut run, &mut d);
    }
    // Keys outside the kind's list stay unset in the echoed config.
    let allowed = kind.run_keys();
    let mut run_value = toml::Value::try_from(&run).expect("run config serializes");
    if let toml::Value::Table(t) = &mut run_value {
        t.retain(|k, _| allowed.contains(&k));
    }
    let run: RunConfig = run_value.try_into().expect("filtered run config deserializes");
    if d.0.is_empty() {
        Ok(Resolved { config: ExperimentConfig { run, ..cfg.clone() }, model })
    } else {
        Err(d.0)
    }
}

fn check_phase(run: &mut RunConfig, count: usize, d: &mut Diags) {
    if count == 0 {
        return;
    }
    let p = *run.phase.get_or_insert(count - 1);
    if p >= count {
        d.push("run.phase", format!("phase index {p} out of range; the model has {count} non-critical phase(s)"));
    }
}

fn check_n_grid(run: &RunConfig, d: &mut Diags) {
    if let Some(g) = &run.n_grid {
        if g.is_empty() {
            d.push("run.n_grid", "must not be empty");
        }
        if g.iter().any(|&n| n < 2) {
            d.push("run.n_grid", "every N must be at least 2");
        }
        if g.windows(2).any(|w| w[1] <= w[0]) {
            d.push("run.n_grid", "must be strictly increasing");
        }
    }
}

fn resolve_gcwm(cfg: &ExperimentConfig, run: &mut RunConfig, d: &mut Diags) -> ModelPlan {
    let kind = cfg.kind;
    let Some(beta) = cfg.model.beta.clone() else {
        d.push("model.beta", "required");
        return ModelPlan::None;
    };
    if beta.is_empty() || beta.iter().any(|b| !b.is_finite()) {
        d.push("model.beta", "must be a non-empty list of finite numbers");
        return ModelPlan::None;
    }
    if let Some(j) = ferromagnetic_violation(&beta) {
        d.push("model.beta", format!("ferromagnetic violation j={j}"));
        return ModelPlan::None;
    }
    let grid = kind == Kind::GcwmClt;
    let n = match (cfg.model.n, grid) {
        (_, true) => 2,
        (Some(n), false) if n >= 1 => n,
        (Some(_), false) => {
            d.push("model.n", "must be at least 1");
            return ModelPlan::None;
        }
        (None, false) => {
            d.push("model.n", "required");
            return ModelPlan::None;
        }
    };
    let params = GcwmParams::new(beta, n).expect("checked coefficients");
    let analysis = match params.find_maximizers(run.grid_size.unwrap(), run.tol.unwrap()) {
        Ok(a) => a,
        Err(e) => {
            d.push("model.beta", format!("rate-function analysis failed: {e}"));
            return ModelPlan::None;
        }
    };
    if !analysis.critical_excluded.is_empty() {
        d.push("model.beta", format!("critical maximizer(s) {:?} are excluded from phase analysis", analysis.critical_excluded));
    }
    let count = analysis.strictly_concave_maximizers.len();
    if count == 0 {
        d.push("model.beta", "no strictly concave global maximizer; every phase is critical");
        return ModelPlan::None;
    }
    if kind.run_keys().contains(&"eta") {
        let eta = *run.eta.get_or_insert(analysis.default_eta());
        let eps = *run.epsilon.get_or_insert(eta / 2.0);
        if !(eta > 0.0) {
            d.push("run.eta", "must be positive");
        } else if !(eps > 0.0 && eps < eta) {
            d.push("run.epsilon", format!("must satisfy 0 < epsilon < eta = {eta}"));
        } else {
            let bands: Vec<PhaseBand> =
                analysis.strictly_concave_maximizers.iter().filter_map(|&m| PhaseBand::new(m, eta, eps).ok()).collect();
            if check_bands_disjoint(&bands).is_err() {
                let m = &analysis.strictly_concave_maximizers;
                let (a, b) = m
                    .windows(2)
                    .map(|w| (w[0], w[1]))
                    .min_by(|x, y| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
                    .expect("two maximizers overlap");
                d.push(
                    "run.eta",
                    format!("eta={eta} exceeds half the gap between maximizers m={a:.10} and m={b:.10} (limit {:.10})", (b - a) / 2.0),
                );
            }
        }
        if kind.run_keys().contains(&"phase") {
            check_phase(run, count, d);
        }
    }
    if kind == Kind::GcwmAnalyze {
        run.lemma_tol.get_or_insert(1e-8);
        run.n_grid.get_or_insert_with(|| vec![100, 200, 400, 800]);
    }
    if kind == Kind::GcwmClt {
        run.n_grid.get_or_insert_with(|| vec![100, 200, 400, 800]);
    }
    check_n_grid(run, d);
    if grid {
        ModelPlan::GcwmGrid { params, analysis }
    } else {
        ModelPlan::Gcwm { params, analysis }
    }
}

fn resolve_ergm(cfg: &ExperimentConfig, run: &mut RunConfig, d: &mut Diags) -> ModelPlan {
    let kind = cfg.kind;
    let Some(beta) = cfg.model.beta.clone() else {
        d.push("model.beta", "required");
        return ModelPlan::None;
    };
    let names = match &cfg.model.graphs {
        Some(g) => g.clone(),
        None => match beta.len() {
            1 => vec!["edge".into()],
            2 => vec!["edge".into(), "triangle".into()],
            _ => {
                d.push("model.graphs", "required when beta has more than two entries");
                return ModelPlan::None;
            }
        },
    };
    let mut graphs = Vec::new();
    for name in &names {
        match SmallGraph::by_name(name) {
            Ok(g) => graphs.push(g),
            Err(e) => d.push("model.graphs", e.to_string()),
        }
    }
    let Some(n) = cfg.model.n else {
        d.push("model.n", "required");
        return ModelPlan::None;
    };
    if graphs.len() != names.len() {
        return ModelPlan::None;
    }
    let spec = match ErgmSpec::new(graphs, beta, n) {
        Ok(s) => s,
        Err(e) => {
            let msg = e.to_string();
            let field = if msg.contains("n must") { "model.n" } else { "model.beta" };
            d.push(field, msg.trim_start_matches("invalid input: ").to_string());
            return ModelPlan::None;
        }
    };
    let analysis = match spec.rate_analysis(run.grid_size.unwrap(), run.tol.unwrap()) {
        Ok(a) => a,
        Err(e) => {
            d.push("model.beta", format!("rate-function analysis failed: {e}"));
            return ModelPlan::None;
        }
    };
    let count = analysis.phases.len();
    if count == 0 {
        d.push("model.beta", "no strictly concave global maximizer; every phase is critical");
        return ModelPlan::None;
    }
    if let Some(ph) = analysis.phases.iter().find(|p| p.inconsistent) {
        d.push("model.beta", format!("inconsistent phase p*={}: 1 − 2p(1−p)h''(p) ≤ 0", ph.p_star));
    }
    if kind.run_keys().contains(&"eta") {
        let default = match kind {
            Kind::ErgmFkg => 0.4,
            Kind::Defect => 0.3,
            _ => 0.2,
        };
        let eta = *run.eta.get_or_insert(default);
        if !(eta > 0.0) {
            d.push("run.eta", "must be positive");
        } else {
            let balls: Vec<CutBall> = analysis.phases.iter().filter_map(|p| CutBall::new(p.p_star, eta).ok()).collect();
            if let Err(e) = check_balls_disjoint(&balls) {
                d.push("run.eta", e.to_string().trim_start_matches("invalid input: ").to_string());
            }
        }
    }
    if kind.run_keys().contains(&"phase") {
        check_phase(run, count, d);
    }
    ModelPlan::Ergm { spec, analysis }
}

fn positive_u64(v: Option<u64>, field: &str, min: u64, d: &mut Diags) {
    if let Some(x) = v {
        if x < min {
            d.push(field, format!("must be at least {min}"));
        }
    }
}

fn resolve_kind(cfg: &ExperimentConfig, model: &ModelPlan, run: &mut RunConfig, d: &mut Diags) {
    let n = cfg.model.n.unwrap_or(0);
    match cfg.kind {
        Kind::GcwmAnalyze | Kind::GcwmClt => {}
        Kind::GcwmFkg => {
            if n > 24 {
                d.push("model.n", "lattice checks enumerate 2^N configurations; need N ≤ 24");
            }
            let scan = *run.scan.get_or_insert(if n <= 12 { Scan::Exhaustive } else { Scan::Sampled });
            if scan == Scan::Exhaustive && n > 12 {
                d.push("run.scan", "exhaustive scans need N ≤ 12");
            }
            positive_u64(Some(*run.pairs.get_or_insert(10_000)), "run.pairs", 1, d);
        }
        Kind::ErgmAnalyze => {
            run.lemma_tol.get_or_insert(1e-8);
            let ge = *run.gamma_epsilon.get_or_insert(0.1);
            let v = *run.gamma_v_max.get_or_insert(3);
            if !(ge > 0.0) {
                d.push("run.gamma_epsilon", "must be positive");
            }
            if !(2..=5).contains(&v) {
                d.push("run.gamma_v_max", "must lie in 2..=5");
            }
        }
        Kind::ErgmSample => {
            run.exact_mode_max_n.get_or_insert(12);
            positive_u64(Some(*run.steps.get_or_insert(100 * edge_count_of(n.max(2)) as u64 * 100)), "run.steps", 1, d);
            positive_u64(Some(*run.record_every.get_or_insert(edge_count_of(n.max(2)) as u64)), "run.record_every", 1, d);
        }
        Kind::ErgmFkg => {
            if n > 7 {
                d.push("model.n", "ERGM lattice checks enumerate 2^C(n,2) graphs; need n ≤ 7");
            }
            let eta = run.eta.unwrap_or(0.4);
            let le = *run.lambda_eta.get_or_insert(eta * 0.625);
            if !(le > 0.0 && le < eta) {
                d.push("run.lambda_eta", format!("must satisfy 0 < lambda_eta < eta = {eta}"));
            }
            let scan = *run.scan.get_or_insert(if n <= 6 { Scan::Exhaustive } else { Scan::Sampled });
            if scan == Scan::Exhaustive && n > 6 {
                d.push("run.scan", "exhaustive ERGM scans need n ≤ 6");
            }
            positive_u64(Some(*run.pairs.get_or_insert(10_000)), "run.pairs", 1, d);
        }
        Kind::ErgmClt => {
            run.exact_mode_max_n.get_or_insert(12);
            let sub = run.subgraph.get_or_insert_with(|| "triangle".into()).clone();
            match SmallGraph::by_name(&sub) {
                Ok(g) if g.edge_count() == 0 => d.push("run.subgraph", "must have at least one edge"),
                Ok(_) => {}
                Err(e) => d.push("run.subgraph", e.to_string()),
            }
            let chains = *run.chains.get_or_insert(8);
            run.burn_in_sweeps.get_or_insert(200);
            positive_u64(Some(*run.pilot_sweeps.get_or_insert(2000)), "run.pilot_sweeps", 10, d);
            let samples = *run.samples.get_or_insert(2000);
            if chains == 0 || samples < chains {
                d.push("run.samples", "need at least one chain and one sample per chain");
            }
        }
        Kind::Defect => {
            let dim = match model {
                ModelPlan::Gcwm { .. } => n,
                ModelPlan::Ergm { .. } => edge_count_of(n.max(2)),
                _ => 0,
            };
            if matches!(model, ModelPlan::Ergm { .. }) && n > 6 {
                d.push("model.n", "ERGM defects need the exact table; need n ≤ 6");
            }
            if dim > 24 {
                d.push("model.n", "defects need the exact table over 2^N configurations; need N ≤ 24");
            }
            let method = *run.method.get_or_insert(DefectMethodChoice::Auto);
            if method == DefectMethodChoice::Exact && dim > 5 {
                d.push("run.method", format!("exact defects enumerate up-sets only for dimension ≤ 5 (got {dim})"));
            }
            positive_u64(Some(*run.pairs.get_or_insert(2000)), "run.pairs", 1, d);
        }
        Kind::Coupling => {
            let t = *run.t.get_or_insert((n * n).max(1) as u64);
            positive_u64(Some(t), "run.t", 1, d);
            positive_u64(Some(*run.replicas.get_or_insert(500)), "run.replicas", 1, d);
            let te = *run.tilt_epsilon.get_or_insert(1.0 / t.max(1) as f64);
            if !(te > 0.0 && te < 1.0) {
                d.push("run.tilt_epsilon", "must lie in (0,1)");
            }
            run.shift_rule.get_or_insert(ShiftRuleChoice::Certified);
            if run.alpha.is_none() {
                positive_u64(Some(*run.contraction_reps.get_or_insert(200_000)), "run.contraction_reps", 100, d);
            } else if run.contraction_reps.is_some() {
                d.push("run.contraction_reps", "not used when alpha is given");
            }
            if let Some(a) = run.alpha {
                if !(0.0..=1.0).contains(&a) {
                    d.push("run.alpha", "must lie in [0,1]");
                }
            }
            positive_u64(Some(*run.z_candidates.get_or_insert(20)), "run.z_candidates", 1, d);
            run.pilot_runs.get_or_insert(20);
            if n > 64 {
                d.push("model.n", "coupling runs support N ≤ 64");
            }
        }
        Kind::BoundEval => {
            match run.alpha {
                None => d.push("run.alpha", "required"),
                Some(a) if !(a >= 0.0 && a.is_finite()) => d.push("run.alpha", "must be finite and non-negative"),
                _ => {}
            }
            match run.mu_lambda_complement {
                None => d.push("run.mu_lambda_complement", "required"),
                Some(m) if !(0.0..=1.0).contains(&m) => d.push("run.mu_lambda_complement", "must lie in [0,1]"),
                _ => {}
            }
            if run.diameter.is_none() {
                d.push("run.diameter", "required");
            }
            let a = *run.alphabet_size.get_or_insert(2);
            if a == 0 {
                d.push("run.alphabet_size", "must be positive");
            }
            let g = run.t_grid.get_or_insert_with(|| vec![1, 10, 100, 1000, 10_000]);
            if g.is_empty() || g.contains(&0) {
                d.push("run.t_grid", "must be a non-empty list of positive horizons");
            }
        }
    }
}
