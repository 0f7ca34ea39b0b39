use serde::Serialize;

use crate::error::{invalid, Result};
use crate::lattice::Distance;

/// Inputs of the general covariance lower bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub t: u64,
    pub alphabet_size: u8,
    pub mu_lambda_complement: f64,
    pub diameter: Distance,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 {
            return invalid("T must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.mu_lambda_complement) {
            return invalid(format!("mu(Lambda^c) = {} outside [0,1]", self.mu_lambda_complement));
        }
        if !(self.alpha >= 0.0) {
            return invalid(format!("alpha must be nonnegative, got {}", self.alpha));
        }
        if self.alphabet_size == 0 {
            return invalid("alphabet size must be positive");
        }
        Ok(())
    }
}

/// 300·√T·(T·μ(Λ^c) + (α + 10|A|/T)^T · diam(Λ)); +∞ for an infinite
/// diameter.
pub fn theorem_bound(b: &BoundInputs) -> Result<f64> {
    b.validate()?;
    let t = b.t as f64;
    let geometric = match b.diameter {
        Distance::Infinite => return Ok(f64::INFINITY),
        Distance::Finite(0) => 0.0,
        Distance::Finite(d) => (b.alpha + 10.0 * b.alphabet_size as f64 / t).powf(t) * d as f64,
    };
    Ok(300.0 * t.sqrt() * (t * b.mu_lambda_complement + geometric))
}

/// Right-hand sides of the three coupling-event bounds at horizon T with
/// mildness ε: base mixing, tilted mixing and loss of domination.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CouplingBounds {
    pub base_mixes: f64,
    pub tilted_mixes: f64,
    pub domination: f64,
}

pub fn coupling_bounds(alpha: f64, t: u64, alphabet_size: u8, epsilon: f64, mu_lambda_complement: f64, diameter: Distance) -> CouplingBounds {
    let tf = t as f64;
    let d = diameter.as_f64();
    let geo = |a: f64| if d == 0.0 { 0.0 } else { a.powf(tf) * d };
    let tilt = 2.0 * (2.0 * epsilon * tf).exp() * tf * mu_lambda_complement;
    CouplingBounds {
        base_mixes: 2.0 * tf * mu_lambda_complement + geo(alpha),
        tilted_mixes: tilt + geo(alpha + 10.0 * alphabet_size as f64 * epsilon),
        domination: tilt,
    }
}
