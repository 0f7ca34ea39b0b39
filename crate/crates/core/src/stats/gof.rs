use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, rejected, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of `observed` counts to `expected` probabilities.
/// Cells with expected count below 5 are pooled in order into their
/// neighbours.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != expected.len() {
        return invalid("observed and expected have different lengths");
    }
    let total: u64 = observed.iter().sum();
    let psum: f64 = expected.iter().sum();
    if total == 0 || !(psum > 0.0) {
        return rejected("empty observation or expectation");
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(expected) {
        o += ob as f64;
        e += p / psum * total as f64;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return rejected("fewer than two cells after pooling");
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let df = cells.len() - 1;
    let dist = ChiSquared::new(df as f64).map_err(|e| crate::Error::Internal(e.to_string()))?;
    Ok(ChiSquareTest { statistic, degrees_of_freedom: df, p_value: 1.0 - dist.cdf(statistic) })
}
