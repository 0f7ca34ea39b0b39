//! Small numerical helpers shared by the models: the logistic map,
//! log-domain normalization, compensated summation and log-binomials.

/// Logistic function φ(s) = e^s / (1 + e^s), evaluated without overflow.
pub fn phi(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// φ'(s) = φ(s)(1 − φ(s)).
pub fn phi_prime(s: f64) -> f64 {
    let p = phi(s);
    p * (1.0 - p)
}

/// log(m / (1 − m)).
pub fn logit(m: f64) -> f64 {
    (m / (1.0 - m)).ln()
}

/// Binary entropy −m log m − (1−m) log(1−m) with 0·log 0 = 0.
pub fn entropy(m: f64) -> f64 {
    let t = |u: f64| if u <= 0.0 { 0.0 } else { -u * u.ln() };
    t(m) + t(1.0 - m)
}

/// log Σ exp(v_i). Returns −∞ for an empty slice or an all −∞ slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = KahanSum::default();
    for &v in values {
        acc.add((v - max).exp());
    }
    max + acc.value().ln()
}

/// Max-subtracted softmax written into `out`. Entries equal to −∞ get
/// probability zero. Returns false when every entry is −∞.
pub fn softmax_into(log_weights: &[f64], out: &mut [f64]) -> bool {
    debug_assert_eq!(log_weights.len(), out.len());
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return false;
    }
    let mut total = 0.0;
    for (o, &w) in out.iter_mut().zip(log_weights) {
        *o = (w - max).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
    true
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut k = KahanSum::default();
    for x in it {
        k.add(x);
    }
    k.value()
}

/// Table of log k! for k = 0..=n, built by compensated accumulation.
pub fn log_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = KahanSum::default();
    out.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

/// log C(n, k) for every k, from a log-factorial table.
pub fn log_binomials(n: usize) -> Vec<f64> {
    let lf = log_factorials(n);
    (0..=n).map(|k| lf[n] - lf[k] - lf[n - k]).collect()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    let x = -std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * p);
    if !x.is_finite() {
        return x;
    }
    // One Newton step sharpens erfc_inv to near machine precision.
    let d = normal_pdf(x);
    if d > 0.0 {
        x - (normal_cdf(x) - p) / d
    } else {
        x
    }
}

/// Wilson score interval for `successes` out of `trials` at z = 1.96.
/// Returns (center, half-width).
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.5, 0.5);
    }
    let z = 1.96_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (center, half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_symmetric_and_stable() {
        assert_eq!(phi(0.0), 0.5);
        assert!((phi(2.5) - 0.924_141_819_978_756_6).abs() < 1e-15);
        assert!((phi(-3.0) + phi(3.0) - 1.0).abs() < 1e-15);
        assert_eq!(phi(-1000.0), 0.0);
        assert_eq!(phi(1000.0), 1.0);
    }

    #[test]
    fn log_binomials_match_direct_products() {
        let lb = log_binomials(10);
        assert!((lb[3] - 120f64.ln()).abs() < 1e-13);
        assert!((lb[5] - 252f64.ln()).abs() < 1e-13);
        assert_eq!(lb[0], 0.0);
    }

    #[test]
    fn softmax_handles_negative_infinity() {
        let mut out = [0.0; 3];
        assert!(softmax_into(&[0.0, f64::NEG_INFINITY, 0.0], &mut out));
        assert_eq!(out, [0.5, 0.0, 0.5]);
        assert!(!softmax_into(&[f64::NEG_INFINITY; 3], &mut out));
    }

    #[test]
    fn normal_quantile_inverts_cdf() {
        for &p in &[1e-6, 0.025, 0.3, 0.5, 0.9, 0.975] {
            assert!((normal_cdf(normal_quantile(p)) - p).abs() < 1e-12, "{p} {}", normal_cdf(normal_quantile(p)));
        }
        assert!((normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-9, "{}", normal_quantile(0.975));
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let v = std::iter::once(1e16).chain(std::iter::repeat_n(1.0, 1000));
        assert_eq!(kahan_sum(v), 1e16 + 1000.0);
    }
}
