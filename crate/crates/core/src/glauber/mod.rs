//! Single-site Glauber dynamics over Gibbs measures, the four-chain monotone
//! coupling, tilted measures and one-step contraction estimates.

mod contraction;
mod coupling;
mod measure;
mod tilt;

pub use contraction::{estimate_contraction, ContractionEstimate};
pub use coupling::{monotone_coupled_step, CoupledMove, CoupledQuadruple};
pub use measure::{ExactTable, GibbsMeasure, MeasureSpec};
pub use tilt::{make_tilt, make_tilt_with, MildnessCheck, ShiftRule, TiltSpec};

use rand::Rng;

use crate::error::{rejected, Result};
use crate::lattice::SpinConfig;
use crate::numeric::softmax_into;

/// Conditional law of coordinate i given the others, restricted to values
/// that keep the state inside the support.
pub fn conditional_update_distribution<M: GibbsMeasure + ?Sized>(mu: &M, x: &SpinConfig, i: usize) -> Result<Vec<f64>> {
    let a = mu.alphabet_size() as usize;
    let mut lw = vec![0.0; a];
    let mut out = vec![0.0; a];
    conditional_into(mu, x, i, &mut lw, &mut out)?;
    Ok(out)
}

/// Allocation-free form of [`conditional_update_distribution`].
pub fn conditional_into<M: GibbsMeasure + ?Sized>(
    mu: &M,
    x: &SpinConfig,
    i: usize,
    scratch: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    mu.site_log_weights(x, i, scratch);
    if !softmax_into(scratch, out) {
        return rejected(format!("isolated state: every value of coordinate {i} leaves the support of {}", mu.label()));
    }
    Ok(())
}

/// Inverse CDF at u ∈ [0,1) with left-closed intervals [F(σ−1), F(σ)).
/// Values with zero probability are never returned.
pub fn inverse_cdf(probs: &[f64], u: f64) -> u8 {
    let mut acc = 0.0;
    let mut last = 0;
    for (s, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = s;
        if u < acc {
            return s as u8;
        }
    }
    last as u8
}

/// Result of one in-place Glauber update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteUpdate {
    pub site: usize,
    pub old: u8,
    pub new: u8,
}

/// One heat-bath update in place: uniform coordinate, value from the
/// support-restricted conditional law.
pub fn glauber_step_mut<M: GibbsMeasure + ?Sized, R: Rng + ?Sized>(mu: &M, x: &mut SpinConfig, rng: &mut R) -> Result<SiteUpdate> {
    let a = mu.alphabet_size() as usize;
    let mut lw = [0.0f64; 16];
    let mut pr = [0.0f64; 16];
    let (lw, pr): (&mut [f64], &mut [f64]) = if a <= 16 {
        (&mut lw[..a], &mut pr[..a])
    } else {
        return glauber_step_alloc(mu, x, rng);
    };
    let i = rng.random_range(0..x.dimension());
    let u: f64 = rng.random();
    conditional_into(mu, x, i, lw, pr)?;
    let old = x.get(i);
    let new = inverse_cdf(pr, u);
    x.set(i, new);
    Ok(SiteUpdate { site: i, old, new })
}

fn glauber_step_alloc<M: GibbsMeasure + ?Sized, R: Rng + ?Sized>(mu: &M, x: &mut SpinConfig, rng: &mut R) -> Result<SiteUpdate> {
    let i = rng.random_range(0..x.dimension());
    let u: f64 = rng.random();
    let pr = conditional_update_distribution(mu, x, i)?;
    let old = x.get(i);
    let new = inverse_cdf(&pr, u);
    x.set(i, new);
    Ok(SiteUpdate { site: i, old, new })
}

/// One Glauber step returning the new state.
pub fn glauber_step<M: GibbsMeasure + ?Sized, R: Rng + ?Sized>(mu: &M, x: &SpinConfig, rng: &mut R) -> Result<SpinConfig> {
    let mut y = x.clone();
    glauber_step_mut(mu, &mut y, rng)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cdf_left_closed() {
        let p = [0.25, 0.5, 0.25];
        assert_eq!(inverse_cdf(&p, 0.0), 0);
        assert_eq!(inverse_cdf(&p, 0.2499), 0);
        assert_eq!(inverse_cdf(&p, 0.25), 1);
        assert_eq!(inverse_cdf(&p, 0.75), 2);
        assert_eq!(inverse_cdf(&p, 0.999_999_999), 2);
        assert_eq!(inverse_cdf(&[0.0, 1.0, 0.0], 0.0), 1);
        assert_eq!(inverse_cdf(&[0.5, 0.5, 0.0], 0.9999999999999999), 1);
    }
}
