//! One-dimensional rate-function analysis shared by the mean-field models:
//! grid scan of L' for sign changes, bisection refinement, and
//! classification of the global maximizers.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// L, L', L'' together with the mean-field map F (m = F(m) at stationary
/// points) and its derivative.
pub struct RateFunction<'a> {
    pub l: &'a dyn Fn(f64) -> f64,
    pub dl: &'a dyn Fn(f64) -> f64,
    pub d2l: &'a dyn Fn(f64) -> f64,
    pub map: &'a dyn Fn(f64) -> f64,
    pub map_derivative: &'a dyn Fn(f64) -> f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryKind {
    LocalMax,
    LocalMin,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryPoint {
    pub m: f64,
    pub l: f64,
    pub dl: f64,
    pub d2l: f64,
    /// m − F(m).
    pub fixed_point_residual: f64,
    /// F'(m).
    pub map_derivative: f64,
    pub kind: StationaryKind,
    /// |L''| below tolerance.
    pub critical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateAnalysis {
    pub stationary_points: Vec<StationaryPoint>,
    /// M: stationary points attaining the global maximum within tolerance.
    pub global_maximizers: Vec<f64>,
    /// U: members of M with L'' < −tol.
    pub strictly_concave_maximizers: Vec<f64>,
    /// Members of M with |L''| < tol.
    pub critical_excluded: Vec<f64>,
    pub max_value: f64,
    pub tolerance: f64,
    pub grid_size: usize,
}

impl RateAnalysis {
    /// Half the smallest gap between consecutive maximizers, capped at 0.1.
    pub fn default_eta(&self) -> f64 {
        let m = &self.global_maximizers;
        let gap = m.windows(2).map(|w| (w[1] - w[0]) / 2.0).fold(f64::INFINITY, f64::min);
        gap.min(0.1)
    }
}

const DL_TOL: f64 = 1e-10;

fn bisect(dl: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // Invariant: dl(lo) > 0 > dl(hi) or the reverse.
    let s_lo = dl(lo).signum();
    for _ in 0..2000 {
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else if hi < 1.0 && (1.0 - lo) / (1.0 - hi) > 4.0 {
            1.0 - ((1.0 - lo) * (1.0 - hi)).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let v = dl(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if v.abs() <= DL_TOL && (hi - lo) < 1e-13 {
            break;
        }
    }
    let (a, b) = (dl(lo).abs(), dl(hi).abs());
    if a <= b {
        lo
    } else {
        hi
    }
}

/// Grid scan plus bisection of L' = 0 on (0,1).
pub fn analyze(rf: &RateFunction<'_>, grid_size: usize, tol: f64) -> Result<RateAnalysis> {
    if grid_size < 1000 {
        return invalid(format!("grid_size must be at least 1000, got {grid_size}"));
    }
    if !(tol > 0.0 && tol <= 1e-8) {
        return invalid(format!("tolerance must lie in (0, 1e-8], got {tol}"));
    }
    let mut grid: Vec<f64> = Vec::with_capacity(grid_size + 2);
    grid.push(1e-300);
    grid.extend((0..grid_size).map(|k| (k as f64 + 0.5) / grid_size as f64));
    grid.push(1.0 - f64::EPSILON / 2.0);
    let vals: Vec<f64> = grid.iter().map(|&m| (rf.dl)(m)).collect();
    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        let (a, b) = (vals[k], vals[k + 1]);
        if a == 0.0 {
            roots.push(grid[k]);
        } else if a.signum() != b.signum() && b != 0.0 {
            roots.push(bisect(rf.dl, grid[k], grid[k + 1]));
        }
    }
    if roots.is_empty() {
        return Err(Error::Internal("no stationary point of the rate function found".into()));
    }
    let points: Vec<StationaryPoint> = roots
        .iter()
        .map(|&m| {
            let eps = 1e-7_f64.min(m / 2.0).min((1.0 - m) / 2.0);
            let before = (rf.dl)(m - eps);
            let d2 = (rf.d2l)(m);
            let kind = if d2 < 0.0 || (d2 == 0.0 && before > 0.0) { StationaryKind::LocalMax } else { StationaryKind::LocalMin };
            StationaryPoint {
                m,
                l: (rf.l)(m),
                dl: (rf.dl)(m),
                d2l: d2,
                fixed_point_residual: m - (rf.map)(m),
                map_derivative: (rf.map_derivative)(m),
                kind,
                critical: d2.abs() < tol,
            }
        })
        .collect();
    let max_value = points.iter().map(|p| p.l).fold(f64::NEG_INFINITY, f64::max);
    let m_set: Vec<&StationaryPoint> =
        points.iter().filter(|p| p.kind == StationaryKind::LocalMax && p.l >= max_value - tol).collect();
    let global_maximizers = m_set.iter().map(|p| p.m).collect();
    let strictly_concave_maximizers = m_set.iter().filter(|p| p.d2l < -tol).map(|p| p.m).collect();
    let critical_excluded = m_set.iter().filter(|p| p.critical).map(|p| p.m).collect();
    Ok(RateAnalysis {
        stationary_points: points,
        global_maximizers,
        strictly_concave_maximizers,
        critical_excluded,
        max_value,
        tolerance: tol,
        grid_size,
    })
}

/// The two statements of the concavity / attracting-fixed-point equivalence
/// evaluated at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LemmaReport {
    pub m: f64,
    /// L'(m) = 0 and L''(m) < 0, stationarity measured by the Newton step
    /// |L'/L''| so that points near the boundary, where L'' blows up, are
    /// judged in m-units.
    pub concave_stationary: bool,
    /// m = F(m) and F'(m) < 1.
    pub attracting_fixed_point: bool,
    pub agree: bool,
}

pub fn lemma_report(rf: &RateFunction<'_>, m: f64, tol: f64) -> Result<LemmaReport> {
    if !(m > 0.0 && m < 1.0) {
        return invalid(format!("m must lie in (0,1), got {m}"));
    }
    let d2 = (rf.d2l)(m);
    let concave_stationary = (rf.dl)(m).abs() <= tol * d2.abs().max(1.0) && d2 < 0.0;
    let attracting_fixed_point = (m - (rf.map)(m)).abs() <= tol && (rf.map_derivative)(m) < 1.0;
    Ok(LemmaReport { m, concave_stationary, attracting_fixed_point, agree: concave_stationary == attracting_fixed_point })
}
