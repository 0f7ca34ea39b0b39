use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::GibbsMeasure;
use super::{conditional_into, inverse_cdf};
use crate::error::{invalid, Result};
use crate::lattice::{hamming, Region, SpinConfig};
use crate::rng::{SeedStream, StreamRng};

/// Empirical one-step contraction of the monotone coupling from adjacent
/// starting points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContractionEstimate {
    pub alpha_hat: f64,
    pub confidence_halfwidth: f64,
    pub sample_count: u64,
    /// scale · (1 − alpha_hat), with scale N for spin models and n² for graphs.
    pub kappa_hat: f64,
    pub kappa_halfwidth: f64,
    pub scale: f64,
}

impl ContractionEstimate {
    /// Upper end of the 95% interval for α.
    pub fn alpha_upper(&self) -> f64 {
        self.alpha_hat + self.confidence_halfwidth
    }

    /// Lower end of the 95% interval for κ.
    pub fn kappa_lower(&self) -> f64 {
        self.kappa_hat - self.kappa_halfwidth
    }
}

const BLOCK: u64 = 512;

/// Estimate α = E[d_H(X_1^a, X_1^b)] for pairs (a, b) drawn by
/// `pair_sampler`, each pair advanced by one coupled Glauber step.
pub fn estimate_contraction<M, P>(
    mu: &M,
    region: &Region,
    pair_sampler: P,
    reps: u64,
    stream: &SeedStream,
    scale: f64,
) -> Result<ContractionEstimate>
where
    M: GibbsMeasure + ?Sized,
    P: Fn(&mut StreamRng) -> Result<(SpinConfig, SpinConfig)> + Sync,
{
    if reps < 100 {
        return invalid(format!("contraction estimate needs at least 100 repetitions, got {reps}"));
    }
    let blocks = reps.div_ceil(BLOCK);
    let a = mu.alphabet_size() as usize;
    let sums: Vec<Result<(u64, u64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream.replica(b);
            let count = BLOCK.min(reps - b * BLOCK);
            let (mut s1, mut s2) = (0u64, 0u64);
            let mut lw = vec![0.0; a];
            let mut pr = vec![0.0; a];
            for _ in 0..count {
                let (mut x, mut y) = pair_sampler(&mut rng)?;
                if hamming(&x, &y)? != 1 || !region.contains(&x) || !region.contains(&y) {
                    return invalid(format!("pair sampler must yield adjacent pairs inside '{}'", region.label()));
                }
                let i = rng.random_range(0..x.dimension());
                let u: f64 = rng.random();
                conditional_into(mu, &x, i, &mut lw, &mut pr)?;
                x.set(i, inverse_cdf(&pr, u));
                conditional_into(mu, &y, i, &mut lw, &mut pr)?;
                y.set(i, inverse_cdf(&pr, u));
                let d = hamming(&x, &y)?;
                s1 += d;
                s2 += d * d;
            }
            Ok((s1, s2))
        })
        .collect();
    let (mut s1, mut s2) = (0u64, 0u64);
    for r in sums {
        let (a, b) = r?;
        s1 += a;
        s2 += b;
    }
    let n = reps as f64;
    let mean = s1 as f64 / n;
    let var = ((s2 as f64 - n * mean * mean) / (n - 1.0)).max(0.0);
    let hw = 1.96 * var.sqrt() / n.sqrt();
    Ok(ContractionEstimate {
        alpha_hat: mean,
        confidence_halfwidth: hw,
        sample_count: reps,
        kappa_hat: scale * (1.0 - mean),
        kappa_halfwidth: scale * hw,
        scale,
    })
}
