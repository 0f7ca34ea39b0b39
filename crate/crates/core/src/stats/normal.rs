use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numeric::{normal_cdf, normal_pdf, normal_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalDistance {
    pub d_k: f64,
    pub d_w: f64,
}

/// Distances of (s − center)/scale, s over `samples`, to N(0,1): the
/// Kolmogorov–Smirnov statistic and the quantile-coupling Wasserstein
/// estimate with plotting positions (i − 0.5)/M.
pub fn normal_distance_samples(samples: &[f64], center: f64, scale: f64) -> Result<NormalDistance> {
    if !(scale > 0.0) {
        return invalid(format!("scale must be positive, got {scale}"));
    }
    if samples.len() < 100 {
        return invalid(format!("normal distance needs at least 100 samples, got {}", samples.len()));
    }
    let mut z: Vec<f64> = samples.iter().map(|s| (s - center) / scale).collect();
    z.sort_by(f64::total_cmp);
    let m = z.len() as f64;
    let mut d_k = 0.0f64;
    let mut w = 0.0;
    for (i, &zi) in z.iter().enumerate() {
        let f = normal_cdf(zi);
        d_k = d_k.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
        w += (zi - normal_quantile((i as f64 + 0.5) / m)).abs();
    }
    Ok(NormalDistance { d_k, d_w: w / m })
}

/// ∫_a^b |c − Φ(s)| ds for a constant c ∈ [0,1] and a ≤ b. A left-infinite
/// interval requires c = 0 and a right-infinite one c = 1.
fn abs_gap_integral(c: f64, a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a == f64::NEG_INFINITY {
        return b * normal_cdf(b) + normal_pdf(b);
    }
    if b == f64::INFINITY {
        return normal_pdf(a) - a * (1.0 - normal_cdf(a));
    }
    let g = |s: f64| s * normal_cdf(s) + normal_pdf(s);
    let signed = |lo: f64, hi: f64| g(hi) - g(lo) - c * (hi - lo);
    let s = if c <= 0.0 {
        f64::NEG_INFINITY
    } else if c >= 1.0 {
        f64::INFINITY
    } else {
        normal_quantile(c)
    };
    if s <= a || s >= b {
        signed(a, b).abs()
    } else {
        signed(a, s).abs() + signed(s, b).abs()
    }
}

/// Distances for an exact discrete law given as (value, probability) atoms:
/// d_K from the CDF at and just below each atom, d_W = ∫|F − Φ|.
pub fn normal_distance_law(atoms: &[(f64, f64)], center: f64, scale: f64) -> Result<NormalDistance> {
    if !(scale > 0.0) {
        return invalid(format!("scale must be positive, got {scale}"));
    }
    let mut pts: Vec<(f64, f64)> = atoms.iter().filter(|a| a.1 > 0.0).map(|&(v, p)| ((v - center) / scale, p)).collect();
    if pts.is_empty() {
        return invalid("law has no atoms with positive mass");
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let mut d_k = 0.0f64;
    let mut d_w = 0.0;
    let mut cdf = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for &(z, p) in &pts {
        d_w += abs_gap_integral(cdf, prev, z);
        let phi = normal_cdf(z);
        d_k = d_k.max((cdf - phi).abs());
        cdf += p / total;
        d_k = d_k.max((cdf - phi).abs());
        prev = z;
    }
    d_w += abs_gap_integral(1.0, prev, f64::INFINITY);
    Ok(NormalDistance { d_k, d_w })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_integral_tails() {
        // ∫_{-∞}^0 Φ = φ(0).
        assert!((abs_gap_integral(0.0, f64::NEG_INFINITY, 0.0) - normal_pdf(0.0)).abs() < 1e-15);
        assert!((abs_gap_integral(1.0, 0.0, f64::INFINITY) - normal_pdf(0.0)).abs() < 1e-15);
        // ∫_{-1}^{1} |1/2 − Φ| = 2(Φ(1) + φ(1) − φ(0) − 1/2).
        let v = abs_gap_integral(0.5, -1.0, 1.0);
        assert!((v - 2.0 * (normal_cdf(1.0) + normal_pdf(1.0) - normal_pdf(0.0) - 0.5)).abs() < 1e-12);
    }
}
