//! ERGM specification: n²·H(x) = Σ_j β_j n^{2−|V_j|} N_{G_j}(x), the rate
//! function L(p) = h(p) − ½(p log p + (1−p) log(1−p)) with h(p) = Σ β_j p^{|E_j|},
//! the σ_n² scale, and the (conditioned) ERGM as a Gibbs measure over the
//! C(n,2) potential edges.

use serde::Serialize;

use super::cutnorm::{cut_norm_to_constant, CutBall};
use super::gamma::GoodSet;
use super::graph::{edge_count_of, edge_endpoints, GraphConfig};
use super::hom::{count_homomorphisms, edge_derivative, hom_density, SmallGraph};
use crate::error::{invalid, rejected, Result};
use crate::glauber::{ExactTable, GibbsMeasure};
use crate::lattice::SpinConfig;
use crate::numeric::{entropy, logit, phi, phi_prime};
use crate::rate::{analyze, lemma_report, LemmaReport, RateAnalysis, RateFunction};

#[derive(Debug, Clone, Serialize)]
pub struct ErgmSpec {
    /// G_0 (a single edge), G_1, …, G_K.
    pub graphs: Vec<SmallGraph>,
    pub beta: Vec<f64>,
    pub n: usize,
}

impl ErgmSpec {
    pub fn new(graphs: Vec<SmallGraph>, beta: Vec<f64>, n: usize) -> Result<Self> {
        if graphs.is_empty() || graphs.len() != beta.len() {
            return invalid(format!("need one coefficient per graph, got {} graphs and {} coefficients", graphs.len(), beta.len()));
        }
        if graphs[0].vertices != 2 || graphs[0].edge_count() != 1 {
            return invalid("G_0 must be a single edge");
        }
        for (j, g) in graphs.iter().enumerate().skip(1) {
            if !g.is_connected() || g.has_isolated_vertex() {
                return invalid(format!("G_{j} ('{}') must be connected without isolated vertices", g.name));
            }
        }
        if let Some(b) = beta.iter().find(|b| !b.is_finite()) {
            return invalid(format!("non-finite coefficient {b}"));
        }
        if let Some(j) = beta.iter().enumerate().skip(1).find(|(_, &b)| b < 0.0).map(|(j, _)| j) {
            return invalid(format!("ferromagnetic violation j={j}"));
        }
        if !(2..=64).contains(&n) {
            return invalid(format!("n must lie in 2..=64, got {n}"));
        }
        Ok(Self { graphs, beta, n })
    }

    pub fn edge_only(beta0: f64, n: usize) -> Result<Self> {
        Self::new(vec![SmallGraph::edge()], vec![beta0], n)
    }

    pub fn edge_triangle(beta0: f64, beta1: f64, n: usize) -> Result<Self> {
        Self::new(vec![SmallGraph::edge(), SmallGraph::triangle()], vec![beta0, beta1], n)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.graphs.clone(), self.beta.clone(), n)
    }

    pub fn dimension(&self) -> usize {
        edge_count_of(self.n)
    }

    pub fn max_pattern_vertices(&self) -> usize {
        self.graphs.iter().map(|g| g.vertices).max().unwrap_or(2)
    }

    /// n^{2−|V_j|}.
    fn scale(&self, j: usize) -> f64 {
        (self.n as f64).powi(2 - self.graphs[j].vertices as i32)
    }

    pub fn h(&self, p: f64) -> f64 {
        self.terms().map(|(b, e)| b * p.powi(e)).sum()
    }

    pub fn h1(&self, p: f64) -> f64 {
        self.terms().map(|(b, e)| b * e as f64 * p.powi(e - 1)).sum()
    }

    pub fn h2(&self, p: f64) -> f64 {
        self.terms().filter(|&(_, e)| e >= 2).map(|(b, e)| b * (e * (e - 1)) as f64 * p.powi(e - 2)).sum()
    }

    fn terms(&self) -> impl Iterator<Item = (f64, i32)> + '_ {
        self.beta.iter().zip(&self.graphs).map(|(&b, g)| (b, g.edge_count() as i32))
    }

    /// H(x) = Σ β_j t(G_j, x).
    pub fn hamiltonian(&self, x: &GraphConfig) -> f64 {
        self.beta.iter().zip(&self.graphs).map(|(&b, g)| b * hom_density(g, x)).sum()
    }

    /// n²·H(x), the unnormalized log-weight.
    pub fn log_weight(&self, x: &GraphConfig) -> f64 {
        (0..self.graphs.len()).map(|j| self.beta[j] * self.scale(j) * count_homomorphisms(&self.graphs[j], x) as f64).sum()
    }

    /// log P(x_e = 1 | rest) − log P(x_e = 0 | rest) for e = {u, v}.
    pub fn site_log_odds(&self, x: &GraphConfig, u: usize, v: usize) -> f64 {
        (0..self.graphs.len())
            .map(|j| self.beta[j] * self.scale(j) * edge_derivative(&self.graphs[j], x, u, v) as f64)
            .sum()
    }

    pub fn rate_function(&self, p: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("density {p} outside [0,1]"));
        }
        let l = self.h(p) + 0.5 * entropy(p);
        if p == 0.0 || p == 1.0 {
            let d = if p == 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            return Ok((l, d, f64::NEG_INFINITY));
        }
        Ok((l, self.h1(p) - 0.5 * logit(p), self.h2(p) - 0.5 / (p * (1.0 - p))))
    }

    /// d/dp φ(2h'(p)).
    pub fn map_derivative(&self, p: f64) -> f64 {
        2.0 * phi_prime(2.0 * self.h1(p)) * self.h2(p)
    }

    fn with_rate_function<T>(&self, f: impl FnOnce(&RateFunction<'_>) -> T) -> T {
        let l = |p: f64| self.h(p) + 0.5 * entropy(p);
        let dl = |p: f64| self.h1(p) - 0.5 * logit(p);
        let d2l = |p: f64| self.h2(p) - 0.5 / (p * (1.0 - p));
        let map = |p: f64| phi(2.0 * self.h1(p));
        let map_derivative = |p: f64| self.map_derivative(p);
        f(&RateFunction { l: &l, dl: &dl, d2l: &d2l, map: &map, map_derivative: &map_derivative })
    }

    pub fn check_lemma_equiv(&self, p: f64, tol: f64) -> Result<LemmaReport> {
        self.with_rate_function(|rf| lemma_report(rf, p, tol))
    }

    /// σ_n² = p(1−p)C(n,2) / (1 − 2p(1−p)h''(p)).
    pub fn sigma_n_squared(&self, p_star: f64) -> Result<f64> {
        let v = p_star * (1.0 - p_star);
        let denom = 1.0 - 2.0 * v * self.h2(p_star);
        if !(denom > 0.0) {
            return rejected(format!("inconsistent phase p*={p_star}: 1 − 2p(1−p)h''(p) = {denom} ≤ 0"));
        }
        Ok(v * edge_count_of(self.n) as f64 / denom)
    }

    pub fn rate_analysis(&self, grid_size: usize, tol: f64) -> Result<ErgmRateAnalysis> {
        let analysis = self.with_rate_function(|rf| analyze(rf, grid_size, tol))?;
        let phases = analysis
            .strictly_concave_maximizers
            .iter()
            .map(|&p| {
                let v = p * (1.0 - p);
                let denom = 1.0 - 2.0 * v * self.h2(p);
                ErgmPhase {
                    p_star: p,
                    h2: self.h2(p),
                    map_derivative: self.map_derivative(p),
                    erdos_renyi_variance: v * edge_count_of(self.n) as f64,
                    sigma_n_squared: if denom > 0.0 { Some(v * edge_count_of(self.n) as f64 / denom) } else { None },
                    inconsistent: !(denom > 0.0),
                }
            })
            .collect();
        Ok(ErgmRateAnalysis { analysis, phases })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErgmPhase {
    pub p_star: f64,
    pub h2: f64,
    /// d/dp φ(2h'(p)) at p*.
    pub map_derivative: f64,
    pub erdos_renyi_variance: f64,
    pub sigma_n_squared: Option<f64>,
    /// 1 − 2p*(1−p*)h''(p*) ≤ 0.
    pub inconsistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErgmRateAnalysis {
    pub analysis: RateAnalysis,
    pub phases: Vec<ErgmPhase>,
}

impl ErgmRateAnalysis {
    /// The phase whose p* is closest to `p`.
    pub fn phase_near(&self, p: f64) -> Option<&ErgmPhase> {
        self.phases.iter().min_by(|a, b| (a.p_star - p).abs().total_cmp(&(b.p_star - p).abs()))
    }
}

/// Support of a (possibly) conditioned ERGM.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Conditioning {
    None,
    /// Exact cut-distance ball (n ≤ its exact-mode limit).
    Ball(CutBall),
    /// APPROXIMATE surrogate: |t(edge, x) − p*| ≤ η/2, optionally intersected
    /// with Γ.
    Proxy { p_star: f64, eta: f64, gamma: Option<GoodSet> },
    Gamma(GoodSet),
}

impl Conditioning {
    /// The exact ball when n allows it, the density-band proxy otherwise.
    pub fn for_ball(ball: CutBall, n: usize) -> Self {
        if n <= ball.exact_mode_max_n {
            Conditioning::Ball(ball)
        } else {
            Conditioning::Proxy { p_star: ball.p_star, eta: ball.eta, gamma: None }
        }
    }

    pub fn is_approximate(&self) -> bool {
        matches!(self, Conditioning::Proxy { .. })
    }

    pub fn contains(&self, x: &GraphConfig) -> bool {
        match self {
            Conditioning::None => true,
            Conditioning::Ball(b) => {
                cut_norm_to_constant(x, b.p_star, b.exact_mode_max_n).map(|c| c.exact && c.value() <= b.eta).unwrap_or(false)
            }
            Conditioning::Proxy { p_star, eta, gamma } => {
                let n = x.n() as f64;
                let t = 2.0 * x.edge_count() as f64 / (n * n);
                (t - p_star).abs() <= eta / 2.0 && gamma.as_ref().is_none_or(|g| g.contains(x))
            }
            Conditioning::Gamma(g) => g.contains(x),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Conditioning::None => "unconditioned".into(),
            Conditioning::Ball(b) => format!("cut ball d(W_x, W_{}) <= {} (exact)", b.p_star, b.eta),
            Conditioning::Proxy { p_star, eta, gamma } => match gamma {
                Some(g) => format!("APPROXIMATE |t(edge)-{p_star}| <= {} and Gamma({})", eta / 2.0, g.epsilon),
                None => format!("APPROXIMATE |t(edge)-{p_star}| <= {}", eta / 2.0),
            },
            Conditioning::Gamma(g) => format!("Gamma(p*={}, eps={})", g.p_star, g.epsilon),
        }
    }
}

/// The ERGM (or its conditioned version) as a Gibbs measure on {0,1}^{C(n,2)}.
#[derive(Debug, Clone)]
pub struct ErgmMeasure {
    pub spec: ErgmSpec,
    pub conditioning: Conditioning,
    endpoints: Vec<(usize, usize)>,
}

impl ErgmMeasure {
    pub fn new(spec: ErgmSpec, conditioning: Conditioning) -> Self {
        let endpoints = edge_endpoints(spec.n);
        Self { spec, conditioning, endpoints }
    }

    pub fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    fn graph(&self, x: &SpinConfig) -> GraphConfig {
        GraphConfig::from_spin(self.spec.n, x).expect("configuration dimension matches the spec")
    }

    /// Exact table over all 2^{C(n,2)} graphs; n ≤ 7.
    pub fn exact_table(&self) -> Result<ExactTable> {
        ExactTable::from_measure(self)
    }
}

impl GibbsMeasure for ErgmMeasure {
    fn dimension(&self) -> usize {
        self.endpoints.len()
    }
    fn label(&self) -> String {
        format!("ERGM beta={:?} n={} | {}", self.spec.beta, self.spec.n, self.conditioning.label())
    }
    fn log_weight(&self, x: &SpinConfig) -> f64 {
        self.spec.log_weight(&self.graph(x))
    }
    fn in_support(&self, x: &SpinConfig) -> bool {
        self.conditioning.contains(&self.graph(x))
    }
    fn site_log_weights(&self, x: &SpinConfig, i: usize, out: &mut [f64]) {
        let mut g = self.graph(x);
        let (u, v) = self.endpoints[i];
        out[0] = 0.0;
        out[1] = self.spec.site_log_odds(&g, u, v);
        if !matches!(self.conditioning, Conditioning::None) {
            for (s, o) in out.iter_mut().enumerate() {
                g.set_edge(u, v, s == 1);
                if !self.conditioning.contains(&g) {
                    *o = f64::NEG_INFINITY;
                }
            }
        }
    }
}

/// Edge-count law from an exact table over {0,1}^{C(n,2)}.
pub fn edge_count_law(table: &ExactTable) -> Vec<f64> {
    let dim = table.dimension();
    let mut out = vec![0.0; dim + 1];
    for (i, &p) in table.probs().iter().enumerate() {
        out[(i as u64).count_ones() as usize] += p;
    }
    out
}
