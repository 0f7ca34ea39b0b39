use serde::Serialize;

use crate::error::{invalid, rejected, Result};
use crate::glauber::ExactTable;
use crate::lattice::{IncreasingFunction, SpinConfig};
use crate::numeric::kahan_sum;

#[derive(Debug, Clone, Serialize)]
pub struct CovBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub interval_length: f64,
    pub delta: f64,
    pub holds: bool,
    /// rhs − lhs.
    pub slack: f64,
    pub exact: bool,
    /// Cov[X_i, X_j].
    pub covariances: Vec<Vec<f64>>,
    /// Standard errors of the sampled covariance entries; empty in exact mode.
    pub covariance_std_errors: Vec<Vec<f64>>,
    pub lhs_std_error: Option<f64>,
}

pub enum CovMode<'a> {
    Exact(&'a ExactTable),
    Sampled(&'a [SpinConfig]),
}

fn lip_of(f: &IncreasingFunction, n: usize, exact: bool) -> Result<Vec<f64>> {
    let lip = match (&f.lip_constants, exact) {
        (Some(l), _) => l.clone(),
        (None, true) if n <= 12 => f.exact_lipschitz(n)?,
        (None, true) => return rejected(format!("'{}' has no Lipschitz constants and N={n} exceeds the exact sweep", f.label)),
        (None, false) => return rejected(format!("sampled mode requires Lipschitz constants for '{}'", f.label)),
    };
    if lip.len() != n {
        return invalid(format!("'{}' has {} Lipschitz constants for N={n}", f.label, lip.len()));
    }
    if lip.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return invalid(format!("'{}' has a non-finite or negative Lipschitz constant", f.label));
    }
    Ok(lip)
}

fn assemble(
    lhs: f64,
    delta: f64,
    lf: &[f64],
    lg: &[f64],
    cov: Vec<Vec<f64>>,
    cov_se: Vec<Vec<f64>>,
    lhs_se: Option<f64>,
) -> CovBoundCheck {
    let interval = 1.0;
    let n = lf.len();
    let rhs = kahan_sum((0..n).flat_map(|i| {
        let cov = &cov;
        (0..n).map(move |j| lf[i] * lg[j] * (cov[i][j] + 4.0 * interval * interval * delta))
    }));
    CovBoundCheck {
        lhs,
        rhs,
        interval_length: interval,
        delta,
        holds: lhs <= rhs + 1e-12,
        slack: rhs - lhs,
        exact: lhs_se.is_none(),
        covariances: cov,
        covariance_std_errors: cov_se,
        lhs_std_error: lhs_se,
    }
}

/// Both sides of the covariance inequality for binary spins (I = [0,1]).
pub fn cov_bound_check(mode: CovMode<'_>, f: &IncreasingFunction, g: &IncreasingFunction, delta: f64) -> Result<CovBoundCheck> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return invalid(format!("delta must be finite and non-negative, got {delta}"));
    }
    match mode {
        CovMode::Exact(table) => {
            let n = table.dimension();
            let lf = lip_of(f, n, true)?;
            let lg = lip_of(g, n, true)?;
            let fv: Vec<f64> = (0..1u64 << n).map(|i| f.eval(&SpinConfig::from_index(n, i))).collect();
            let gv: Vec<f64> = (0..1u64 << n).map(|i| g.eval(&SpinConfig::from_index(n, i))).collect();
            let lhs = table.covariance(|i| fv[i as usize], |i| gv[i as usize]).abs();
            Ok(assemble(lhs, delta, &lf, &lg, table.coordinate_covariances(), Vec::new(), None))
        }
        CovMode::Sampled(samples) => {
            let Some(first) = samples.first() else {
                return rejected("no samples");
            };
            if samples.len() < 30 {
                return rejected(format!("sampled covariance needs at least 30 samples, got {}", samples.len()));
            }
            let n = first.dimension();
            let lf = lip_of(f, n, false)?;
            let lg = lip_of(g, n, false)?;
            let fv: Vec<f64> = samples.iter().map(|x| f.eval(x)).collect();
            let gv: Vec<f64> = samples.iter().map(|x| g.eval(x)).collect();
            let (lhs, lhs_se) = sample_cov(&fv, &gv);
            let cols: Vec<Vec<f64>> = (0..n).map(|i| samples.iter().map(|x| x.get(i) as f64).collect()).collect();
            let mut cov = vec![vec![0.0; n]; n];
            let mut se = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in i..n {
                    let (c, s) = sample_cov(&cols[i], &cols[j]);
                    cov[i][j] = c;
                    cov[j][i] = c;
                    se[i][j] = s;
                    se[j][i] = s;
                }
            }
            Ok(assemble(lhs.abs(), delta, &lf, &lg, cov, se, Some(lhs_se)))
        }
    }
}

/// Unbiased sample covariance and its standard error.
pub fn sample_cov(a: &[f64], b: &[f64]) -> (f64, f64) {
    let m = a.len() as f64;
    let ma = a.iter().sum::<f64>() / m;
    let mb = b.iter().sum::<f64>() / m;
    let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let c = prods.iter().sum::<f64>() / (m - 1.0);
    let mean_p = prods.iter().sum::<f64>() / m;
    let var_p = prods.iter().map(|p| (p - mean_p).powi(2)).sum::<f64>() / (m - 1.0);
    (c, (var_p / m).sqrt())
}
