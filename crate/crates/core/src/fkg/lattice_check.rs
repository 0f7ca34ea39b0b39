use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::glauber::{ExactTable, GibbsMeasure};
use crate::lattice::SpinConfig;

/// Threshold below which a log-ratio counts as a violation.
pub const LATTICE_TOL: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeMode {
    /// All pairs; N ≤ 12.
    Exhaustive,
    /// `per_stratum` random pairs at each Hamming distance 1..=N.
    Sampled { per_stratum: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    /// min of log μ(x∧y) + log μ(x∨y) − log μ(x) − log μ(y) over pairs with
    /// x, y in the support (−∞ when meet or join leaves it).
    pub min_log_ratio: f64,
    /// Present when the minimum is below the violation threshold.
    pub witness: Option<(SpinConfig, SpinConfig)>,
    pub pairs_checked: u64,
    pub exhaustive: bool,
}

impl LatticeReport {
    pub fn holds(&self) -> bool {
        self.min_log_ratio >= LATTICE_TOL
    }
}

/// FKG lattice condition over a binary measure with N ≤ 24.
pub fn check_lattice_condition<M: GibbsMeasure + ?Sized, R: Rng + ?Sized>(
    mu: &M,
    mode: LatticeMode,
    rng: &mut R,
) -> Result<LatticeReport> {
    let table = ExactTable::from_measure(mu)?;
    check_lattice_table(&table, mode, rng)
}

pub fn check_lattice_table<R: Rng + ?Sized>(table: &ExactTable, mode: LatticeMode, rng: &mut R) -> Result<LatticeReport> {
    let n = table.dimension();
    let lw = table.log_weights();
    let ratio = |x: u64, y: u64| -> f64 {
        let r = lw[(x & y) as usize] + lw[(x | y) as usize] - lw[x as usize] - lw[y as usize];
        if r.is_nan() {
            f64::NEG_INFINITY
        } else {
            r
        }
    };
    let (min, arg, count) = match mode {
        LatticeMode::Exhaustive => {
            if n > 12 {
                return invalid(format!("exhaustive lattice check needs N ≤ 12, got {n}"));
            }
            let parts: Vec<(f64, (u64, u64), u64)> = (0..1usize << n)
                .into_par_iter()
                .map(|x| {
                    let x = x as u64;
                    let mut best = (f64::INFINITY, (x, x), 0u64);
                    if !table.in_support(x) {
                        return best;
                    }
                    for y in x + 1..1u64 << n {
                        // Comparable pairs give ratio 0.
                        if x & y == x || x & y == y || !table.in_support(y) {
                            continue;
                        }
                        best.2 += 1;
                        let r = ratio(x, y);
                        if r < best.0 {
                            best.0 = r;
                            best.1 = (x, y);
                        }
                    }
                    best
                })
                .collect();
            let count = parts.iter().map(|p| p.2).sum();
            let best = parts.into_iter().fold((f64::INFINITY, (0, 0)), |acc, p| if p.0 < acc.0 { (p.0, p.1) } else { acc });
            (best.0, best.1, count)
        }
        LatticeMode::Sampled { per_stratum } => {
            let support: Vec<u64> = (0..1u64 << n).filter(|&i| table.in_support(i)).collect();
            let mut best = (f64::INFINITY, (0u64, 0u64));
            let mut count = 0;
            for d in 1..=n {
                let mut drawn = 0;
                let mut attempts = 0;
                while drawn < per_stratum && attempts < per_stratum * 100 {
                    attempts += 1;
                    let x = support[rng.random_range(0..support.len())];
                    let flips = rand::seq::index::sample(rng, n, d);
                    let y = flips.iter().fold(x, |acc, i| acc ^ (1u64 << i));
                    if !table.in_support(y) {
                        continue;
                    }
                    drawn += 1;
                    count += 1;
                    let r = ratio(x, y);
                    if r < best.0 {
                        best = (r, (x, y));
                    }
                }
            }
            (best.0, best.1, count)
        }
    };
    let min = if count == 0 { 0.0 } else { min };
    let witness = (min < LATTICE_TOL).then(|| (SpinConfig::from_index(n, arg.0), SpinConfig::from_index(n, arg.1)));
    Ok(LatticeReport { min_log_ratio: min, witness, pairs_checked: count, exhaustive: matches!(mode, LatticeMode::Exhaustive) })
}
