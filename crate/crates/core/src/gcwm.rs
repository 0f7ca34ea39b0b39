//! Generalized Curie–Weiss models: h(m) = Σ_j β_j m^j, H(x) = h(m(x)) and
//! ν(x) ∝ exp(N·H(x)) on {0,1}^N.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, rejected, Result};
use crate::glauber::GibbsMeasure;
use crate::lattice::{Distance, Region, SpinConfig};
use crate::numeric::{entropy, kahan_sum, log_binomials, log_sum_exp, logit, phi, phi_prime};
use crate::rate::{analyze, lemma_report, LemmaReport, RateAnalysis, RateFunction};

/// Relative fuzz used when testing |k/N − m*| ≤ η so that levels exactly on
/// the boundary are kept despite rounding.
const BAND_FUZZ: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GcwmParams {
    /// β_1, …, β_K.
    pub beta: Vec<f64>,
    pub n: usize,
}

impl GcwmParams {
    pub fn new(beta: Vec<f64>, n: usize) -> Result<Self> {
        if beta.is_empty() {
            return invalid("beta must have at least one entry");
        }
        if let Some(b) = beta.iter().find(|b| !b.is_finite()) {
            return invalid(format!("non-finite coefficient {b}"));
        }
        if let Some(j) = ferromagnetic_violation(&beta) {
            return invalid(format!("ferromagnetic violation j={j}"));
        }
        if n == 0 {
            return invalid("N must be positive");
        }
        Ok(Self { beta, n })
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { beta: self.beta.clone(), n }
    }

    pub fn k(&self) -> usize {
        self.beta.len()
    }

    /// h(m) = Σ β_j m^j.
    pub fn h(&self, m: f64) -> f64 {
        self.beta.iter().rev().fold(0.0, |acc, &b| (acc + b) * m)
    }

    pub fn h1(&self, m: f64) -> f64 {
        self.beta.iter().enumerate().rev().fold(0.0, |acc, (j, &b)| acc * m + (j + 1) as f64 * b)
    }

    pub fn h2(&self, m: f64) -> f64 {
        self.beta
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, &b)| acc * m + ((j + 1) * j) as f64 * b)
    }

    pub fn h3(&self, m: f64) -> f64 {
        self.beta
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (j, &b)| acc * m + ((j + 1) * j * (j - 1)) as f64 * b)
    }

    /// H(x) = h(m(x)).
    pub fn hamiltonian(&self, x: &SpinConfig) -> f64 {
        self.h(x.magnetization())
    }

    /// (L, L', L'') at m, with L(m) = h(m) + entropy(m). Derivatives are
    /// ±∞ at the endpoints.
    pub fn rate_function(&self, m: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..=1.0).contains(&m) {
            return invalid(format!("magnetization {m} outside [0,1]"));
        }
        let l = self.h(m) + entropy(m);
        if m == 0.0 || m == 1.0 {
            let d = if m == 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            return Ok((l, d, f64::NEG_INFINITY));
        }
        Ok((l, self.h1(m) - logit(m), self.h2(m) - 1.0 / (m * (1.0 - m))))
    }

    /// d/dm φ(h'(m)).
    pub fn phi_derivative(&self, m: f64) -> f64 {
        phi_prime(self.h1(m)) * self.h2(m)
    }

    pub fn find_maximizers(&self, grid_size: usize, tol: f64) -> Result<RateAnalysis> {
        with_rate_function(self, |rf| analyze(rf, grid_size, tol))
    }

    pub fn check_lemma_equiv(&self, m: f64, tol: f64) -> Result<LemmaReport> {
        with_rate_function(self, |rf| lemma_report(rf, m, tol))
    }

    /// Mean-field variance of Σ x_i in the phase around m*:
    /// N·m*(1−m*)/(1 − m*(1−m*)h''(m*)).
    pub fn mean_field_variance(&self, m_star: f64) -> f64 {
        let v = m_star * (1.0 - m_star);
        self.n as f64 * v / (1.0 - v * self.h2(m_star))
    }
}

/// First index j ≥ 2 (1-based) with β_j < 0.
pub fn ferromagnetic_violation(beta: &[f64]) -> Option<usize> {
    beta.iter().enumerate().skip(1).find(|(_, &b)| b < 0.0).map(|(j, _)| j + 1)
}

fn with_rate_function<T>(p: &GcwmParams, f: impl FnOnce(&RateFunction<'_>) -> T) -> T {
    let l = |m: f64| p.h(m) + entropy(m);
    let dl = |m: f64| p.h1(m) - logit(m);
    let d2l = |m: f64| p.h2(m) - 1.0 / (m * (1.0 - m));
    let map = |m: f64| phi(p.h1(m));
    let map_derivative = |m: f64| p.phi_derivative(m);
    f(&RateFunction { l: &l, dl: &dl, d2l: &d2l, map: &map, map_derivative: &map_derivative })
}

/// Magnetization band {x : |m(x) − m*| ≤ η} with inner band of width ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseBand {
    pub m_star: f64,
    pub eta: f64,
    pub epsilon: f64,
}

impl PhaseBand {
    pub fn new(m_star: f64, eta: f64, epsilon: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return invalid(format!("eta must be positive, got {eta}"));
        }
        if !(epsilon > 0.0 && epsilon < eta) {
            return invalid(format!("epsilon must lie in (0, eta={eta}), got {epsilon}"));
        }
        if !(0.0..=1.0).contains(&m_star) {
            return invalid(format!("m* = {m_star} outside [0,1]"));
        }
        Ok(Self { m_star, eta, epsilon })
    }

    /// Band with the default widths: η = min(half minimal maximizer gap,
    /// 0.1), ε = η/2.
    pub fn defaults(analysis: &RateAnalysis) -> Result<Vec<Self>> {
        let eta = analysis.default_eta();
        analysis.global_maximizers.iter().map(|&m| Self::new(m, eta, eta / 2.0)).collect()
    }

    fn within(&self, k: usize, n: usize, width: f64) -> bool {
        ((k as f64 / n as f64) - self.m_star).abs() <= width * (1.0 + BAND_FUZZ) + BAND_FUZZ
    }

    /// Level k/N lies in the η-band.
    pub fn contains_level(&self, k: usize, n: usize) -> bool {
        self.within(k, n, self.eta)
    }

    /// Level k/N lies in the inner ε-band Λ.
    pub fn inner_contains_level(&self, k: usize, n: usize) -> bool {
        self.within(k, n, self.epsilon)
    }

    /// Inclusive level range of the band of given width, if non-empty.
    pub fn level_range(&self, n: usize, width: f64) -> Option<(usize, usize)> {
        let ks: Vec<usize> = (0..=n).filter(|&k| self.within(k, n, width)).collect();
        Some((*ks.first()?, *ks.last()?))
    }

    /// Λ = inner ε-band as a region of {0,1}^N. Bands with at least two
    /// levels are connected with intrinsic distance equal to Hamming
    /// distance, so N is a certified diameter bound; a single level is
    /// disconnected once it holds more than one configuration.
    pub fn inner_region(&self, n: usize) -> Region {
        let band = *self;
        let region = Region::from_predicate(format!("|m-{:.6}|<={}", self.m_star, self.epsilon), move |x| {
            x.dimension() == n && band.inner_contains_level(x.sum() as usize, n)
        });
        let diam = match self.level_range(n, self.epsilon) {
            Some((lo, hi)) if lo < hi => Distance::Finite(n as u64),
            Some((k, _)) if k == 0 || k == n => Distance::Finite(0),
            _ => Distance::Infinite,
        };
        region.with_certified_diameter(diam)
    }

    /// The η-band as a region.
    pub fn outer_region(&self, n: usize) -> Region {
        let band = *self;
        Region::from_predicate(format!("|m-{:.6}|<={}", self.m_star, self.eta), move |x| {
            x.dimension() == n && band.contains_level(x.sum() as usize, n)
        })
    }
}

/// Bands around distinct maximizers must be disjoint: gap > 2η.
pub fn check_bands_disjoint(bands: &[PhaseBand]) -> Result<()> {
    for (i, a) in bands.iter().enumerate() {
        for b in &bands[i + 1..] {
            if (a.m_star - b.m_star).abs() <= a.eta + b.eta {
                return invalid(format!(
                    "bands around maximizers {:.6} and {:.6} overlap (eta {} and {})",
                    a.m_star, b.m_star, a.eta, b.eta
                ));
            }
        }
    }
    Ok(())
}

/// Exact law of m(X), normalized in log domain.
#[derive(Debug, Clone, Serialize)]
pub struct MagnetizationLaw {
    pub n: usize,
    pub log_probabilities: Vec<f64>,
    pub conditioning_band: Option<PhaseBand>,
}

impl MagnetizationLaw {
    pub fn prob(&self, k: usize) -> f64 {
        self.log_probabilities[k].exp()
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probabilities.iter().map(|l| l.exp()).collect()
    }

    /// E[f(k)].
    pub fn expect(&self, f: impl Fn(usize) -> f64) -> f64 {
        kahan_sum(self.log_probabilities.iter().enumerate().filter(|(_, l)| l.is_finite()).map(|(k, l)| l.exp() * f(k)))
    }

    pub fn mean_sum(&self) -> f64 {
        self.expect(|k| k as f64)
    }

    pub fn variance_sum(&self) -> f64 {
        let mu = self.mean_sum();
        self.expect(|k| (k as f64 - mu).powi(2))
    }

    /// log P(k ∈ levels).
    pub fn log_mass(&self, pred: impl Fn(usize) -> bool) -> f64 {
        let v: Vec<f64> = self.log_probabilities.iter().enumerate().filter(|(k, _)| pred(*k)).map(|(_, &l)| l).collect();
        log_sum_exp(&v)
    }

    /// Level drawn by inverse CDF at u ∈ [0,1).
    pub fn level_at(&self, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last = 0;
        for (k, l) in self.log_probabilities.iter().enumerate() {
            if *l == f64::NEG_INFINITY {
                continue;
            }
            acc += l.exp();
            last = k;
            if u < acc {
                return k;
            }
        }
        last
    }
}

/// Exact law of the magnetization level k, P(k) ∝ C(N,k)·exp(N·h(k/N)),
/// optionally restricted to a band.
pub fn exact_magnetization_law(params: &GcwmParams, band: Option<&PhaseBand>) -> Result<MagnetizationLaw> {
    let n = params.n;
    if n > 1_000_000 {
        return invalid(format!("exact law limited to N ≤ 10^6, got {n}"));
    }
    let lb = log_binomials(n);
    let nf = n as f64;
    let raw: Vec<f64> = (0..=n)
        .map(|k| match band {
            Some(b) if !b.contains_level(k, n) => f64::NEG_INFINITY,
            _ => lb[k] + nf * params.h(k as f64 / nf),
        })
        .collect();
    let z = log_sum_exp(&raw);
    if z == f64::NEG_INFINITY {
        return rejected("conditioning band captures no magnetization level");
    }
    Ok(MagnetizationLaw {
        n,
        log_probabilities: raw.iter().map(|&r| r - z).collect(),
        conditioning_band: band.copied(),
    })
}

/// log of the unconditioned mass outside every band.
pub fn out_of_band_log_mass(params: &GcwmParams, bands: &[PhaseBand]) -> Result<f64> {
    let law = exact_magnetization_law(params, None)?;
    Ok(law.log_mass(|k| !bands.iter().any(|b| b.contains_level(k, params.n))))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExchangeableMoments {
    pub mean_x1: f64,
    pub mean_x1x2: f64,
    pub cov_x1x2: f64,
    /// N·Var(x₁) + N(N−1)·Cov(x₁,x₂).
    pub var_sum: f64,
}

/// Single- and pair-site moments of an exchangeable law from its
/// magnetization law: E[x₁] = E[m], E[x₁x₂] = E[k(k−1)]/(N(N−1)).
pub fn exchangeable_moments(law: &MagnetizationLaw) -> Result<ExchangeableMoments> {
    let n = law.n;
    if n < 2 {
        return invalid("pair moments need N ≥ 2");
    }
    let nf = n as f64;
    let mean_x1 = law.expect(|k| k as f64 / nf);
    let mean_x1x2 = law.expect(|k| (k as f64) * (k as f64 - 1.0) / (nf * (nf - 1.0)));
    let cov = mean_x1x2 - mean_x1 * mean_x1;
    let var1 = mean_x1 * (1.0 - mean_x1);
    Ok(ExchangeableMoments { mean_x1, mean_x1x2, cov_x1x2: cov, var_sum: nf * var1 + nf * (nf - 1.0) * cov })
}

/// Exact finite difference together with its leading-order approximation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PartialReport {
    pub exact: f64,
    pub leading: f64,
    pub gap: f64,
}

fn count_without(x: &SpinConfig, sites: &[usize]) -> usize {
    x.sum() as usize - sites.iter().map(|&i| x.get(i) as usize).sum::<usize>()
}

fn partial1(f: impl Fn(f64) -> f64, fp: impl Fn(f64) -> f64, x: &SpinConfig, i: usize) -> PartialReport {
    let n = x.dimension() as f64;
    let c = count_without(x, &[i]) as f64;
    let exact = f((c + 1.0) / n) - f(c / n);
    let leading = fp(c / n) / n;
    PartialReport { exact, leading, gap: exact - leading }
}

fn partial2(f: impl Fn(f64) -> f64, fpp: impl Fn(f64) -> f64, x: &SpinConfig, i: usize, j: usize) -> Result<PartialReport> {
    if i == j {
        return invalid("second discrete partial needs i ≠ j");
    }
    let n = x.dimension() as f64;
    let c = count_without(x, &[i, j]) as f64;
    let exact = f((c + 2.0) / n) - 2.0 * f((c + 1.0) / n) + f(c / n);
    let leading = fpp(c / n) / (n * n);
    Ok(PartialReport { exact, leading, gap: exact - leading })
}

/// ∂_i H(x) = H(x^{+i}) − H(x^{−i}) with leading term h'(m(x^{−i}))/N.
pub fn discrete_partial(params: &GcwmParams, x: &SpinConfig, i: usize) -> PartialReport {
    partial1(|m| params.h(m), |m| params.h1(m), x, i)
}

/// ∂_j ∂_i H(x) with leading term h''(m(x^{−i,−j}))/N².
pub fn discrete_partial2(params: &GcwmParams, x: &SpinConfig, i: usize, j: usize) -> Result<PartialReport> {
    partial2(|m| params.h(m), |m| params.h2(m), x, i, j)
}

/// ∂_i m(x)^k with leading term k·m(x^{−i})^{k−1}/N.
pub fn monomial_partial(k: i32, x: &SpinConfig, i: usize) -> PartialReport {
    partial1(|m| m.powi(k), |m| k as f64 * m.powi(k - 1), x, i)
}

/// ∂_j ∂_i m(x)^k with leading term k(k−1)·m^{k−2}/N².
pub fn monomial_partial2(k: i32, x: &SpinConfig, i: usize, j: usize) -> Result<PartialReport> {
    partial2(|m| m.powi(k), |m| (k * (k - 1)) as f64 * if k >= 2 { m.powi(k - 2) } else { 0.0 }, x, i, j)
}

/// ν or its phase restriction μ as a Gibbs measure on {0,1}^N.
#[derive(Debug, Clone)]
pub struct GcwmMeasure {
    pub params: GcwmParams,
    pub band: Option<PhaseBand>,
    level_log_weights: Vec<f64>,
}

impl GcwmMeasure {
    pub fn new(params: GcwmParams, band: Option<PhaseBand>) -> Self {
        let n = params.n;
        let nf = n as f64;
        let level_log_weights = (0..=n)
            .map(|k| match band {
                Some(b) if !b.contains_level(k, n) => f64::NEG_INFINITY,
                _ => nf * params.h(k as f64 / nf),
            })
            .collect();
        Self { params, band, level_log_weights }
    }

    /// N·h(k/N) for levels in the support, −∞ otherwise.
    pub fn level_log_weight(&self, k: usize) -> f64 {
        self.level_log_weights[k]
    }

    /// Exact stationary draw: a level from the magnetization law and then a
    /// uniformly random set of that size.
    pub fn sample_exact<R: Rng + ?Sized>(&self, law: &MagnetizationLaw, rng: &mut R) -> SpinConfig {
        let u: f64 = rng.random();
        let k = law.level_at(u);
        let mut x = SpinConfig::zeros(2, self.params.n);
        for i in sample(rng, self.params.n, k) {
            x.set(i, 1);
        }
        x
    }
}

impl GibbsMeasure for GcwmMeasure {
    fn dimension(&self) -> usize {
        self.params.n
    }
    fn label(&self) -> String {
        match &self.band {
            Some(b) => format!("GCWM beta={:?} N={} | |m-{:.6}|<={}", self.params.beta, self.params.n, b.m_star, b.eta),
            None => format!("GCWM beta={:?} N={}", self.params.beta, self.params.n),
        }
    }
    fn log_weight(&self, x: &SpinConfig) -> f64 {
        self.params.n as f64 * self.params.h(x.magnetization())
    }
    fn in_support(&self, x: &SpinConfig) -> bool {
        self.level_log_weights[x.sum() as usize] > f64::NEG_INFINITY
    }
    fn site_log_weights(&self, x: &SpinConfig, i: usize, out: &mut [f64]) {
        let c = x.sum() as usize - x.get(i) as usize;
        out[0] = self.level_log_weights[c];
        out[1] = self.level_log_weights[c + 1];
    }
    fn support_log_weight(&self, x: &SpinConfig) -> f64 {
        self.level_log_weights[x.sum() as usize]
    }
}

/// Result of a local FKG scan.
#[derive(Debug, Clone, Serialize)]
pub struct LocalFkgReport {
    /// min of log μ(x∨y) + log μ(x∧y) − log μ(x) − log μ(y) over
    /// admissible pairs with x, y in the support.
    pub min_log_ratio: f64,
    pub witness: Option<(SpinConfig, SpinConfig)>,
    pub pairs_checked: u64,
    pub superadditivity_checked: u64,
    pub superadditivity_violations: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    /// Uniformly drawn admissible pairs.
    Sampled { pairs: u64 },
}

/// Scan of the local FKG condition for the phase measure of `band`:
/// x and y within Hamming distance 1 of Λ (the inner ε-band), and both
/// meet and join within Hamming distance 1 of {x, y}.
pub fn local_fkg_witness<R: Rng + ?Sized>(
    params: &GcwmParams,
    band: &PhaseBand,
    mode: ScanMode,
    rng: &mut R,
) -> Result<LocalFkgReport> {
    let n = params.n;
    let mu = GcwmMeasure::new(params.clone(), Some(*band));
    let (lam_lo, lam_hi) = match band.level_range(n, band.epsilon) {
        Some(r) => r,
        None => return rejected("inner band contains no magnetization level"),
    };
    let near = |k: usize| k + 1 >= lam_lo && k <= lam_hi + 1;
    let nf = n as f64;
    let degrees: Vec<i32> = params.beta.iter().enumerate().filter(|(_, &b)| b > 0.0).map(|(j, _)| j as i32 + 1).collect();
    let mut report = LocalFkgReport {
        min_log_ratio: f64::INFINITY,
        witness: None,
        pairs_checked: 0,
        superadditivity_checked: 0,
        superadditivity_violations: 0,
        exhaustive: matches!(mode, ScanMode::Exhaustive),
    };
    // For a pair the relevant data are |x∧y| = a, |x∖y| = b, |y∖x| = c.
    let visit = |a: usize, b: usize, c: usize, report: &mut LocalFkgReport, pair: &dyn Fn() -> (SpinConfig, SpinConfig)| {
        report.pairs_checked += 1;
        let (fa, fb, fc) = (a as f64 / nf, b as f64 / nf, c as f64 / nf);
        for &k in &degrees {
            report.superadditivity_checked += 1;
            let lhs = (fa + fb + fc).powi(k) + fa.powi(k);
            let rhs = (fa + fb).powi(k) + (fa + fc).powi(k);
            if lhs < rhs - 1e-12 {
                report.superadditivity_violations += 1;
            }
        }
        let wx = mu.level_log_weight(a + b);
        let wy = mu.level_log_weight(a + c);
        if wx == f64::NEG_INFINITY || wy == f64::NEG_INFINITY {
            return;
        }
        let r = mu.level_log_weight(a + b + c) + mu.level_log_weight(a) - wx - wy;
        if r < report.min_log_ratio {
            report.min_log_ratio = r;
            if r < -1e-10 || report.witness.is_none() {
                report.witness = Some(pair());
            }
        }
    };
    match mode {
        ScanMode::Exhaustive => {
            if n > 12 {
                return invalid(format!("exhaustive local FKG scan needs N ≤ 12, got {n}"));
            }
            for x in 0..1u64 << n {
                if !near(x.count_ones() as usize) {
                    continue;
                }
                for y in 0..1u64 << n {
                    let b = (x & !y).count_ones() as usize;
                    let c = (y & !x).count_ones() as usize;
                    if !near(y.count_ones() as usize) || b.min(c) > 1 {
                        continue;
                    }
                    let a = (x & y).count_ones() as usize;
                    visit(a, b, c, &mut report, &|| (SpinConfig::from_index(n, x), SpinConfig::from_index(n, y)));
                }
            }
        }
        ScanMode::Sampled { pairs } => {
            let mut done = 0;
            let mut attempts = 0u64;
            while done < pairs {
                attempts += 1;
                if attempts > pairs.saturating_mul(1000) {
                    return rejected("could not draw admissible pairs near the inner band");
                }
                let kx = rng.random_range(lam_lo.saturating_sub(1)..=(lam_hi + 1).min(n));
                let b = rng.random_range(0..=1usize.min(kx));
                let c = rng.random_range(0..=(n - kx));
                let a = kx - b;
                if !near(a + c) {
                    continue;
                }
                let (b, c) = if rng.random::<bool>() { (b, c) } else { (c, b) };
                done += 1;
                let pair = || {
                    let mut x = SpinConfig::zeros(2, n);
                    let mut y = SpinConfig::zeros(2, n);
                    for i in 0..a {
                        x.set(i, 1);
                        y.set(i, 1);
                    }
                    for i in a..a + b {
                        x.set(i, 1);
                    }
                    for i in a + b..a + b + c {
                        y.set(i, 1);
                    }
                    (x, y)
                };
                visit(a, b, c, &mut report, &pair);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = GcwmParams::new(vec![0.5, 2.0, 1.0], 10).unwrap();
        let m = 0.3;
        assert!((p.h(m) - (0.5 * m + 2.0 * m * m + m * m * m)).abs() < 1e-15);
        assert!((p.h1(m) - (0.5 + 4.0 * m + 3.0 * m * m)).abs() < 1e-15);
        assert!((p.h2(m) - (4.0 + 6.0 * m)).abs() < 1e-15);
        assert!((p.h3(m) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn ferromagnetic_check() {
        let e = GcwmParams::new(vec![1.0, -0.5], 4).unwrap_err();
        assert!(e.to_string().contains("ferromagnetic violation j=2"));
        assert!(GcwmParams::new(vec![-3.0, 3.0], 4).is_ok());
    }

    #[test]
    fn rate_function_examples() {
        let p = GcwmParams::new(vec![0.0, 0.0], 4).unwrap();
        assert!((p.rate_function(0.5).unwrap().0 - 2f64.ln()).abs() < 1e-15);
        for b2 in [0.0, 1.0, 3.0] {
            let p = GcwmParams::new(vec![0.0, b2], 4).unwrap();
            assert!((p.rate_function(0.5).unwrap().2 - (2.0 * b2 - 4.0)).abs() < 1e-12);
        }
        assert!(p.rate_function(1.5).is_err());
        let (l0, d0, _) = p.rate_function(0.0).unwrap();
        assert_eq!(l0, 0.0);
        assert_eq!(d0, f64::INFINITY);
        let q = GcwmParams::new(vec![0.3, 0.2, 0.1], 5).unwrap();
        assert!((q.hamiltonian(&SpinConfig::ones(5)) - 0.6).abs() < 1e-15);
    }
}
