//! The approximate-FKG defect δ = max(0, sup −Cov[f, g]) over increasing f, g
//! with ‖f‖∞, ‖g‖∞ ≤ 1. The extreme points of that ball are the ±1-valued
//! increasing functions 2·1_U − 1, so on small cubes the supremum is a
//! finite maximum over pairs of up-sets.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::glauber::{ExactTable, GibbsMeasure};
use crate::lattice::{enumerate_upsets, SpinConfig, UpSet};
use crate::numeric::KahanSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DefectMethod {
    ExactUpset,
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub delta: f64,
    /// Descriptions of the witnessing pair of functions.
    pub witness: Option<(String, String)>,
    pub method: DefectMethod,
    pub sample_count: u64,
    /// Unclamped maximum of −Cov; negative values are floored in `delta`.
    pub raw_max: f64,
    pub clamped: bool,
    /// Standard error of the witnessing covariance (0 for exact covariances).
    pub std_error: f64,
    /// Sampled reports are lower bounds on the true δ.
    pub lower_bound: bool,
}

/// Exact δ by scanning all ordered pairs of up-sets; N ≤ 5.
pub fn exact_defect<M: GibbsMeasure + ?Sized>(mu: &M) -> Result<DefectReport> {
    if mu.alphabet_size() != 2 {
        return invalid("exact defect needs a binary alphabet");
    }
    let n = mu.dimension();
    if n > 5 {
        return invalid(format!("exact defect enumerates up-sets only for N ≤ 5 (got {n}); use sampled_defect"));
    }
    let table = ExactTable::from_measure(mu)?;
    exact_defect_table(&table)
}

pub fn exact_defect_table(table: &ExactTable) -> Result<DefectReport> {
    let n = table.dimension();
    if n > 5 {
        return invalid(format!("exact defect enumerates up-sets only for N ≤ 5 (got {n}); use sampled_defect"));
    }
    let ups = enumerate_upsets(n)?;
    let masks: Vec<u64> = ups.iter().map(|u| u.mask()[0]).collect();
    let probs = table.probs();
    // Byte-wise lookup: P(mask) = Σ_b lut[b][byte b of mask].
    let bytes = (1usize << n).div_ceil(8);
    let lut: Vec<[f64; 256]> = (0..bytes)
        .map(|b| {
            let mut t = [0.0; 256];
            for (v, slot) in t.iter_mut().enumerate() {
                let mut s = KahanSum::default();
                for k in 0..8 {
                    let idx = b * 8 + k;
                    if v >> k & 1 == 1 && idx < probs.len() {
                        s.add(probs[idx]);
                    }
                }
                *slot = s.value();
            }
            t
        })
        .collect();
    let prob = |m: u64| -> f64 { (0..bytes).map(|b| lut[b][(m >> (8 * b) & 0xff) as usize]).sum() };
    let p: Vec<f64> = masks.iter().map(|&m| prob(m)).collect();
    let (best, bi, bj) = (0..masks.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, i, i);
            for j in 0..masks.len() {
                let v = 4.0 * (p[i] * p[j] - prob(masks[i] & masks[j]));
                if v > best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, 0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) { b } else { a });
    Ok(DefectReport {
        delta: best.max(0.0),
        witness: Some((describe(&ups[bi]), describe(&ups[bj]))),
        method: DefectMethod::ExactUpset,
        sample_count: (masks.len() * masks.len()) as u64,
        raw_max: best,
        clamped: best < 0.0,
        std_error: 0.0,
        lower_bound: false,
    })
}

fn describe(u: &UpSet) -> String {
    format!("2*1_U-1, U generated by {}", u.describe())
}

/// Where covariances come from in the sampled defect.
pub enum CovSource<'a> {
    /// Exact covariances from enumeration.
    Exact(&'a ExactTable),
    /// Plug-in covariances from (approximately) independent draws.
    Samples(&'a [SpinConfig]),
}

/// Random threshold-of-score up-sets: f(x) = 2·1{w·x + v·(pair terms) ≥ τ} − 1
/// with nonnegative weights, so f is increasing.
#[derive(Debug, Clone)]
pub struct ThresholdFunction {
    pub weights: Vec<f64>,
    /// Nonnegative coefficients on products x_i x_j.
    pub pair_terms: Vec<(usize, usize, f64)>,
    pub threshold: f64,
}

impl ThresholdFunction {
    pub fn score(&self, x: &SpinConfig) -> f64 {
        let mut s = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if x.get(i) == 1 {
                s += w;
            }
        }
        for &(i, j, w) in &self.pair_terms {
            if x.get(i) == 1 && x.get(j) == 1 {
                s += w;
            }
        }
        s
    }

    pub fn score_index(&self, idx: u64) -> f64 {
        let mut s = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            if idx >> i & 1 == 1 {
                s += w;
            }
        }
        for &(i, j, w) in &self.pair_terms {
            if idx >> i & 1 == 1 && idx >> j & 1 == 1 {
                s += w;
            }
        }
        s
    }

    pub fn describe(&self) -> String {
        format!(
            "2*1{{score>={:.6}}}-1, weights [{}]{}",
            self.threshold,
            self.weights.iter().map(|w| format!("{w:.4}")).collect::<Vec<_>>().join(","),
            if self.pair_terms.is_empty() { String::new() } else { format!(", {} pair terms", self.pair_terms.len()) }
        )
    }
}

fn random_function<R: Rng + ?Sized>(n: usize, scores_of: impl Fn(&ThresholdFunction) -> Vec<f64>, rng: &mut R) -> ThresholdFunction {
    let style = rng.random_range(0..4);
    let weights: Vec<f64> = match style {
        0 => vec![1.0; n],
        1 => (0..n).map(|_| rng.random::<f64>()).collect(),
        2 => {
            let mut w = vec![0.0; n];
            w[rng.random_range(0..n)] = 1.0;
            w
        }
        _ => (0..n).map(|_| if rng.random::<f64>() < 0.5 { rng.random::<f64>() } else { 0.0 }).collect(),
    };
    let pair_terms = if rng.random::<f64>() < 0.3 {
        (0..n).map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random::<f64>())).filter(|t| t.0 != t.1).collect()
    } else {
        Vec::new()
    };
    let mut f = ThresholdFunction { weights, pair_terms, threshold: 0.0 };
    let mut scores = scores_of(&f);
    scores.sort_by(f64::total_cmp);
    scores.dedup();
    // Thresholds at attained score values give every distinct up-set of the
    // family; pick one uniformly.
    f.threshold = scores[rng.random_range(0..scores.len())];
    f
}

/// Lower bound on δ from `pairs` random pairs of threshold functions.
pub fn sampled_defect<R: Rng + ?Sized>(source: CovSource<'_>, n: usize, pairs: u64, rng: &mut R) -> Result<DefectReport> {
    let (support, weights): (Vec<u64>, Vec<f64>) = match &source {
        CovSource::Exact(t) => {
            if t.dimension() != n {
                return invalid("exact table dimension does not match n");
            }
            (0..1u64 << n).filter(|&i| t.in_support(i)).map(|i| (i, t.probs()[i as usize])).unzip()
        }
        CovSource::Samples(s) => {
            if s.len() < 30 {
                return invalid(format!("sampled defect needs at least 30 samples, got {}", s.len()));
            }
            (Vec::new(), Vec::new())
        }
    };
    if pairs == 0 {
        return invalid("sampled defect needs at least one pair");
    }
    let scores_of = |f: &ThresholdFunction| -> Vec<f64> {
        match &source {
            CovSource::Exact(_) => support.iter().map(|&i| f.score_index(i)).collect(),
            CovSource::Samples(s) => s.iter().map(|x| f.score(x)).collect(),
        }
    };
    let mut best = (f64::NEG_INFINITY, 0.0, String::new(), String::new());
    for _ in 0..pairs {
        let f = random_function(n, scores_of, rng);
        let g = random_function(n, scores_of, rng);
        let fv: Vec<f64> = scores_of(&f).iter().map(|&s| if s >= f.threshold { 1.0 } else { -1.0 }).collect();
        let gv: Vec<f64> = scores_of(&g).iter().map(|&s| if s >= g.threshold { 1.0 } else { -1.0 }).collect();
        let (cov, se) = match &source {
            CovSource::Exact(_) => (weighted_cov(&fv, &gv, &weights), 0.0),
            CovSource::Samples(_) => sample_cov(&fv, &gv),
        };
        if -cov > best.0 {
            best = (-cov, se, f.describe(), g.describe());
        }
    }
    Ok(DefectReport {
        delta: best.0.max(0.0),
        witness: Some((best.2, best.3)),
        method: DefectMethod::Sampled,
        sample_count: match source {
            CovSource::Exact(_) => pairs,
            CovSource::Samples(s) => s.len() as u64,
        },
        raw_max: best.0,
        clamped: best.0 < 0.0,
        std_error: best.1,
        lower_bound: true,
    })
}

fn weighted_cov(f: &[f64], g: &[f64], w: &[f64]) -> f64 {
    let mut ef = KahanSum::default();
    let mut eg = KahanSum::default();
    for i in 0..w.len() {
        ef.add(w[i] * f[i]);
        eg.add(w[i] * g[i]);
    }
    let (ef, eg) = (ef.value(), eg.value());
    let mut c = KahanSum::default();
    for i in 0..w.len() {
        c.add(w[i] * (f[i] - ef) * (g[i] - eg));
    }
    c.value()
}

/// Plug-in covariance and its delta-method standard error.
fn sample_cov(f: &[f64], g: &[f64]) -> (f64, f64) {
    let m = f.len() as f64;
    let ef = f.iter().sum::<f64>() / m;
    let eg = g.iter().sum::<f64>() / m;
    let prods: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a - ef) * (b - eg)).collect();
    let cov = prods.iter().sum::<f64>() / (m - 1.0);
    let var = prods.iter().map(|p| (p - cov).powi(2)).sum::<f64>() / (m - 1.0);
    (cov, (var / m).sqrt())
}
