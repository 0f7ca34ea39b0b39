use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, rejected, Result};
use crate::lattice::{Region, SpinConfig};
use crate::numeric::{kahan_sum, log_sum_exp};

/// A Gibbs measure on A^N given by an unnormalized log-density and a support.
pub trait GibbsMeasure: Send + Sync {
    fn dimension(&self) -> usize;

    fn alphabet_size(&self) -> u8 {
        2
    }

    fn label(&self) -> String;

    /// Unnormalized log-density, ignoring the support.
    fn log_weight(&self, x: &SpinConfig) -> f64;

    fn in_support(&self, _x: &SpinConfig) -> bool {
        true
    }

    /// log-weight of x^{σ→i} for every σ, −∞ where the substitution leaves
    /// the support. Models override this with closed forms.
    fn site_log_weights(&self, x: &SpinConfig, i: usize, out: &mut [f64]) {
        let mut y = x.clone();
        for (s, o) in out.iter_mut().enumerate() {
            y.set(i, s as u8);
            *o = if self.in_support(&y) { self.log_weight(&y) } else { f64::NEG_INFINITY };
        }
    }

    /// log-weight restricted to the support (−∞ outside).
    fn support_log_weight(&self, x: &SpinConfig) -> f64 {
        if self.in_support(x) {
            self.log_weight(x)
        } else {
            f64::NEG_INFINITY
        }
    }
}

impl<M: GibbsMeasure + ?Sized> GibbsMeasure for &M {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn alphabet_size(&self) -> u8 {
        (**self).alphabet_size()
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn log_weight(&self, x: &SpinConfig) -> f64 {
        (**self).log_weight(x)
    }
    fn in_support(&self, x: &SpinConfig) -> bool {
        (**self).in_support(x)
    }
    fn site_log_weights(&self, x: &SpinConfig, i: usize, out: &mut [f64]) {
        (**self).site_log_weights(x, i, out)
    }
}

impl<M: GibbsMeasure + ?Sized> GibbsMeasure for Arc<M> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn alphabet_size(&self) -> u8 {
        (**self).alphabet_size()
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn log_weight(&self, x: &SpinConfig) -> f64 {
        (**self).log_weight(x)
    }
    fn in_support(&self, x: &SpinConfig) -> bool {
        (**self).in_support(x)
    }
    fn site_log_weights(&self, x: &SpinConfig, i: usize, out: &mut [f64]) {
        (**self).site_log_weights(x, i, out)
    }
}

type LogWeight = Arc<dyn Fn(&SpinConfig) -> f64 + Send + Sync>;

/// A Gibbs measure assembled from a closure and a support region.
#[derive(Clone)]
pub struct MeasureSpec {
    dimension: usize,
    alphabet_size: u8,
    log_weight: LogWeight,
    support: Region,
    label: String,
}

impl fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("label", &self.label)
            .field("dimension", &self.dimension)
            .field("alphabet_size", &self.alphabet_size)
            .field("support", &self.support)
            .finish()
    }
}

impl MeasureSpec {
    pub fn new(
        label: impl Into<String>,
        alphabet_size: u8,
        dimension: usize,
        log_weight: impl Fn(&SpinConfig) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dimension,
            alphabet_size,
            log_weight: Arc::new(log_weight),
            support: Region::full(alphabet_size, dimension),
            label: label.into(),
        }
    }

    /// Uniform measure on the full cube.
    pub fn uniform(alphabet_size: u8, dimension: usize) -> Self {
        Self::new(format!("uniform on {alphabet_size}^{dimension}"), alphabet_size, dimension, |_| 0.0)
    }

    /// Product measure with per-site log-weights `site[i][σ]`.
    pub fn product(site: Vec<Vec<f64>>) -> Result<Self> {
        let a = site.first().map_or(0, |s| s.len());
        if a == 0 || a > 255 || site.iter().any(|s| s.len() != a) {
            return invalid("product measure needs a rectangular, non-empty table of site weights");
        }
        let n = site.len();
        Ok(Self::new(format!("product on {a}^{n}"), a as u8, n, move |x| {
            site.iter().enumerate().map(|(i, s)| s[x.get(i) as usize]).sum()
        }))
    }

    /// Same log-weight conditioned on `support`.
    pub fn conditioned(mut self, support: Region) -> Self {
        self.label = format!("{} | {}", self.label, support.label());
        self.support = support;
        self
    }

    pub fn support(&self) -> &Region {
        &self.support
    }
}

impl GibbsMeasure for MeasureSpec {
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }
    fn label(&self) -> String {
        self.label.clone()
    }
    fn log_weight(&self, x: &SpinConfig) -> f64 {
        (self.log_weight)(x)
    }
    fn in_support(&self, x: &SpinConfig) -> bool {
        self.support.contains(x)
    }
}

/// Exact enumeration of a binary measure on {0,1}^N (N ≤ 24): log-weights
/// (−∞ off support), the log partition function and probabilities.
#[derive(Debug, Clone)]
pub struct ExactTable {
    n: usize,
    log_weights: Vec<f64>,
    log_z: f64,
    probs: Vec<f64>,
}

impl ExactTable {
    pub fn from_measure<M: GibbsMeasure + ?Sized>(mu: &M) -> Result<Self> {
        let n = mu.dimension();
        if mu.alphabet_size() != 2 {
            return invalid("exact tables are implemented for binary alphabets");
        }
        if n > 24 {
            return invalid(format!("exact enumeration capped at N=24, got {n}"));
        }
        let log_weights: Vec<f64> = (0..1u64 << n)
            .into_par_iter()
            .map(|i| mu.support_log_weight(&SpinConfig::from_index(n, i)))
            .collect();
        Self::from_log_weights(n, log_weights)
    }

    pub fn from_log_weights(n: usize, log_weights: Vec<f64>) -> Result<Self> {
        if log_weights.len() != 1usize << n {
            return invalid("log-weight table length must be 2^N");
        }
        let log_z = log_sum_exp(&log_weights);
        if log_z == f64::NEG_INFINITY {
            return rejected("measure has empty support");
        }
        let probs = log_weights.iter().map(|&w| (w - log_z).exp()).collect();
        Ok(Self { n, log_weights, log_z, probs })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Normalized log-probability of configuration index `i`.
    pub fn log_prob(&self, i: u64) -> f64 {
        self.log_weights[i as usize] - self.log_z
    }

    pub fn in_support(&self, i: u64) -> bool {
        self.log_weights[i as usize] > f64::NEG_INFINITY
    }

    pub fn expect(&self, f: impl Fn(u64) -> f64) -> f64 {
        kahan_sum(self.probs.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(i, &p)| p * f(i as u64)))
    }

    /// Cov[f, g] under the table.
    pub fn covariance(&self, f: impl Fn(u64) -> f64, g: impl Fn(u64) -> f64) -> f64 {
        let ef = self.expect(&f);
        let eg = self.expect(&g);
        self.expect(|i| (f(i) - ef) * (g(i) - eg))
    }

    /// The N×N table Cov[X_i, X_j].
    pub fn coordinate_covariances(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mean: Vec<f64> = (0..n).map(|i| self.expect(|x| (x >> i & 1) as f64)).collect();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let c = self.expect(|x| ((x >> i & 1) as f64 - mean[i]) * ((x >> j & 1) as f64 - mean[j]));
                out[i][j] = c;
                out[j][i] = c;
            }
        }
        out
    }
}
