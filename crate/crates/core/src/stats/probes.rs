use serde::Serialize;

use crate::ergm::{edge_count_of, GraphConfig};
use crate::error::{invalid, rejected, Result};

const Z95: f64 = 1.959_963_984_540_054;

/// Which products of edge indicators to average.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSelection {
    /// ∏ X(e_j) for the given distinct edges against E[X(e)]^k with e the
    /// reference edge (or the edge density when `reference` is None).
    Direct { edges: Vec<(usize, usize)>, reference: Option<(usize, usize)> },
    /// k = 2 over all ordered pairs of adjacent edges in each sample against
    /// the squared mean edge density; exact for edge-transitive measures.
    AdjacentPairSymmetrized,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbePoint {
    pub n: usize,
    /// |Ê[∏X(e_j)] − Ê[X(e)]^k|.
    pub deviation: f64,
    pub signed_deviation: f64,
    pub halfwidth: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultilinearProbe {
    pub k: usize,
    pub points: Vec<ProbePoint>,
    /// Least-squares slope of ln(deviation) on ln(n).
    pub slope: Option<f64>,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt())
}

fn density(g: &GraphConfig) -> f64 {
    g.edge_count() as f64 / edge_count_of(g.n()) as f64
}

/// Σ_v d_v(d_v − 1) / (n(n−1)(n−2)): the fraction of ordered adjacent edge
/// pairs that are both present.
fn adjacent_pair_density(g: &GraphConfig) -> f64 {
    let n = g.n();
    let s: u64 = (0..n).map(|v| g.degree(v) as u64).map(|d| d * d.saturating_sub(1)).sum();
    s as f64 / (n * (n - 1) * (n - 2)) as f64
}

/// Deviation estimate at one n with a delta-method 95% half-width (samples
/// are taken as independent).
pub fn multilinear_deviation(samples: &[GraphConfig], selection: &EdgeSelection) -> Result<ProbePoint> {
    let Some(first) = samples.first() else {
        return rejected("no samples");
    };
    if samples.len() < 2 {
        return rejected("need at least two samples");
    }
    let n = first.n();
    let (prod, refv, k): (Vec<f64>, Vec<f64>, usize) = match selection {
        EdgeSelection::Direct { edges, reference } => {
            let k = edges.len();
            if k == 0 || k > 4 {
                return invalid(format!("k must lie in 1..=4, got {k}"));
            }
            let mut norm: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            if norm.iter().chain(reference.iter()).any(|&(u, v)| u == v || u.max(v) >= n) {
                return invalid(format!("edges must join distinct vertices below n={n}"));
            }
            norm.sort_unstable();
            norm.dedup();
            if norm.len() != k {
                return rejected("edge multiset has repeated edges");
            }
            let prod = samples.iter().map(|g| edges.iter().all(|&(u, v)| g.has_edge(u, v)) as u8 as f64).collect();
            let refv = samples
                .iter()
                .map(|g| match reference {
                    Some((u, v)) => g.has_edge(*u, *v) as u8 as f64,
                    None => density(g),
                })
                .collect();
            (prod, refv, k)
        }
        EdgeSelection::AdjacentPairSymmetrized => {
            if n < 3 {
                return invalid("adjacent pairs need n >= 3");
            }
            (samples.iter().map(adjacent_pair_density).collect(), samples.iter().map(density).collect(), 2)
        }
    };
    let m = samples.len() as f64;
    let mp = prod.iter().sum::<f64>() / m;
    let mr = refv.iter().sum::<f64>() / m;
    let signed = mp - mr.powi(k as i32);
    let grad = k as f64 * mr.powi(k as i32 - 1);
    let infl: Vec<f64> = prod.iter().zip(&refv).map(|(p, r)| p - grad * r).collect();
    let (_, sd) = mean_sd(&infl);
    Ok(ProbePoint { n, deviation: signed.abs(), signed_deviation: signed, halfwidth: Z95 * sd / m.sqrt(), samples: samples.len() })
}

/// Least-squares slope of ln y on ln x over points with y > 0.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Deviation per n-grid point and the fitted scaling exponent.
pub fn multilinear_probe(grid: &[&[GraphConfig]], selection: impl Fn(usize) -> EdgeSelection) -> Result<MultilinearProbe> {
    let mut points = Vec::with_capacity(grid.len());
    let mut k = 0;
    for samples in grid {
        let Some(first) = samples.first() else {
            return rejected("empty sample set in grid");
        };
        let sel = selection(first.n());
        k = match &sel {
            EdgeSelection::Direct { edges, .. } => edges.len(),
            EdgeSelection::AdjacentPairSymmetrized => 2,
        };
        points.push(multilinear_deviation(samples, &sel)?);
    }
    let slope = log_log_slope(&points.iter().map(|p| (p.n as f64, p.deviation)).collect::<Vec<_>>());
    Ok(MultilinearProbe { k, points, slope })
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginalPoint {
    pub n: usize,
    /// Mean edge density, the symmetrized estimate of E[X(e)].
    pub mean: f64,
    pub deviation: f64,
    pub halfwidth: f64,
    /// √(log n / n).
    pub envelope: f64,
    pub within_envelope: bool,
    pub samples: usize,
}

pub fn marginal_probe(grid: &[&[GraphConfig]], p_star: f64) -> Result<Vec<MarginalPoint>> {
    grid.iter()
        .map(|samples| {
            let Some(first) = samples.first() else {
                return rejected("empty sample set in grid");
            };
            if samples.len() < 2 {
                return rejected("need at least two samples");
            }
            let n = first.n();
            let d: Vec<f64> = samples.iter().map(density).collect();
            let (mean, sd) = mean_sd(&d);
            let deviation = (mean - p_star).abs();
            let envelope = ((n as f64).ln() / n as f64).sqrt();
            Ok(MarginalPoint {
                n,
                mean,
                deviation,
                halfwidth: Z95 * sd / (d.len() as f64).sqrt(),
                envelope,
                within_envelope: deviation <= envelope,
                samples: samples.len(),
            })
        })
        .collect()
}
