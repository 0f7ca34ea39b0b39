use serde::Serialize;

use super::mcmc::{thinned_phase_chain, ChainPlan, ThinnedChain};
use super::normal::{normal_distance_law, normal_distance_samples};
use crate::ergm::{count_homomorphisms, Conditioning, CutBall, ErgmSpec, SmallGraph};
use crate::error::{invalid, rejected, Result};
use crate::gcwm::{exact_magnetization_law, GcwmParams, PhaseBand};
use crate::rng::SeedStream;

pub const MIN_EFFECTIVE_SAMPLES: f64 = 200.0;

#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub statistic: String,
    pub n: usize,
    pub exact: bool,
    pub center: f64,
    pub scale: f64,
    pub scale_source: String,
    pub d_k: f64,
    pub d_w: f64,
    pub sample_count: Option<usize>,
    /// Exact or sample variance of the statistic.
    pub variance: f64,
    /// Variance predicted by the phase formula.
    pub reference_variance: f64,
    pub reference_formula: String,
    pub variance_ratio: f64,
    pub approximate: bool,
}

/// Exact normal approximation of Σx_i under the GCWM conditioned on `band`
/// for each N in the grid, standardized by the exact mean and standard
/// deviation.
pub fn clt_report_gcwm(params: &GcwmParams, band: &PhaseBand, n_grid: &[usize]) -> Result<Vec<CltReport>> {
    n_grid
        .iter()
        .map(|&n| {
            let p = params.with_n(n);
            let law = exact_magnetization_law(&p, Some(band))?;
            let center = law.mean_sum();
            let variance = law.variance_sum();
            if !(variance > 0.0) {
                return rejected(format!("phase law at N={n} is degenerate"));
            }
            let scale = variance.sqrt();
            let atoms: Vec<(f64, f64)> = (0..=n).map(|k| (k as f64, law.prob(k))).collect();
            let d = normal_distance_law(&atoms, center, scale)?;
            let reference = p.mean_field_variance(band.m_star);
            Ok(CltReport {
                statistic: "magnetization sum".into(),
                n,
                exact: true,
                center,
                scale,
                scale_source: "exact standard deviation".into(),
                d_k: d.d_k,
                d_w: d.d_w,
                sample_count: None,
                variance,
                reference_variance: reference,
                reference_formula: "N m*(1-m*) / (1 - m*(1-m*) h''(m*))".into(),
                variance_ratio: variance / reference,
                approximate: false,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ErgmCltConfig {
    /// Cut-ball radius; above the ball's exact limit the density proxy is used.
    pub eta: f64,
    pub exact_mode_max_n: usize,
    pub subgraph: SmallGraph,
    pub plan: ChainPlan,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErgmCltReport {
    pub n: usize,
    pub p_star: f64,
    pub sigma_n_squared: f64,
    pub edge: CltReport,
    pub subgraph: CltReport,
    /// Pearson correlation of the two standardized statistics.
    pub correlation: f64,
    pub chain: ThinnedChain,
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    (mean, v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0))
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let c = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() as f64 - 1.0);
    c / (va * vb).sqrt()
}

/// MCMC normal approximation of the edge count and a subgraph hom count
/// under the phase-conditioned ERGM, scaled by σ_n and by
/// 2|E|p*^{|E|−1}n^{|V|−2}σ_n respectively.
pub fn clt_report_ergm(spec: &ErgmSpec, p_star: f64, cfg: &ErgmCltConfig, stream: &SeedStream) -> Result<ErgmCltReport> {
    if cfg.subgraph.edge_count() == 0 {
        return invalid("subgraph must have at least one edge");
    }
    let sigma2 = spec.sigma_n_squared(p_star)?;
    let ball = CutBall { exact_mode_max_n: cfg.exact_mode_max_n, ..CutBall::new(p_star, cfg.eta)? };
    let conditioning = Conditioning::for_ball(ball, spec.n);
    let chain = thinned_phase_chain(spec, &conditioning, p_star, &cfg.plan, stream)?;
    if chain.effective_samples < MIN_EFFECTIVE_SAMPLES {
        return rejected(format!(
            "effective sample size {:.1} < {MIN_EFFECTIVE_SAMPLES} (tau_pilot={:.2} sweeps, thin={}, tau_retained={:.2})",
            chain.effective_samples, chain.tau_pilot, chain.thin, chain.tau_retained
        ));
    }
    let edges: Vec<f64> = chain.states.iter().map(|g| g.edge_count() as f64).collect();
    let homs: Vec<f64> = chain.states.iter().map(|g| count_homomorphisms(&cfg.subgraph, g) as f64).collect();
    let sigma = sigma2.sqrt();
    let n = spec.n;
    let ge = cfg.subgraph.edge_count() as i32;
    let gv = cfg.subgraph.vertices as i32;
    let sub_scale = 2.0 * ge as f64 * p_star.powi(ge - 1) * (n as f64).powi(gv - 2) * sigma;
    let approximate = chain.approximate;
    let build = |name: String, v: &[f64], scale: f64, source: &str, formula: &str| -> Result<CltReport> {
        let (mean, var) = mean_var(v);
        let d = normal_distance_samples(v, mean, scale)?;
        Ok(CltReport {
            statistic: name,
            n,
            exact: false,
            center: mean,
            scale,
            scale_source: source.into(),
            d_k: d.d_k,
            d_w: d.d_w,
            sample_count: Some(v.len()),
            variance: var,
            reference_variance: scale * scale,
            reference_formula: formula.into(),
            variance_ratio: var / (scale * scale),
            approximate,
        })
    };
    let edge = build(
        "edge count".into(),
        &edges,
        sigma,
        "sigma_n",
        "p*(1-p*)C(n,2) / (1 - 2p*(1-p*)h''(p*))",
    )?;
    let subgraph = build(
        format!("{} hom count", cfg.subgraph.name),
        &homs,
        sub_scale,
        "2|E|p*^(|E|-1) n^(|V|-2) sigma_n",
        "(2|E|p*^(|E|-1) n^(|V|-2))^2 sigma_n^2",
    )?;
    let correlation = pearson(&edges, &homs);
    Ok(ErgmCltReport { n, p_star, sigma_n_squared: sigma2, edge, subgraph, correlation, chain })
}
