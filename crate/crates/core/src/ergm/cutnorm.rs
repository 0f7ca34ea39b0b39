//! Cut distance between the graphon of a finite graph (zero on diagonal
//! blocks) and a constant graphon W_p.
//!
//! d(W_x, W_p) = max over S, T ⊆ [n] of |e(S,T) − p|S||T|| / n², where
//! e(S,T) counts ordered pairs. For fixed S the best T collects the vertices
//! with positive (or negative) c_v = d_S(v) − p|S|, so only S is enumerated.

use rayon::prelude::*;
use serde::Serialize;

use super::graph::GraphConfig;
use crate::error::{invalid, Result};

pub const DEFAULT_EXACT_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutNormBound {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl CutNormBound {
    pub fn value(&self) -> f64 {
        self.lower
    }
}

/// Per-subset aggregates: sums and counts of d_S(v) strictly above and
/// strictly below the threshold p|S|.
#[derive(Debug, Clone, Copy, Default)]
struct Aggregate {
    d_above: i64,
    k_above: i64,
    d_below: i64,
    k_below: i64,
}

impl Aggregate {
    #[inline]
    fn add(&mut self, d: u32, t: f64, sign: i64) {
        let df = d as f64;
        if df > t {
            self.d_above += sign * d as i64;
            self.k_above += sign;
        } else if df < t {
            self.d_below += sign * d as i64;
            self.k_below += sign;
        }
    }

    #[inline]
    fn objective(&self, t: f64) -> f64 {
        let pos = self.d_above as f64 - t * self.k_above as f64;
        let neg = t * self.k_below as f64 - self.d_below as f64;
        pos.max(neg)
    }
}

fn aggregate(rows: &[u64], s: u64, t: f64) -> Aggregate {
    let mut a = Aggregate::default();
    for &r in rows {
        a.add((r & s).count_ones(), t, 1);
    }
    a
}

fn exact_scan(x: &GraphConfig, p: f64) -> f64 {
    let n = x.n();
    let rows = x.rows();
    let best = (0..1usize << n)
        .into_par_iter()
        .with_min_len(256)
        .map(|s| s as u64)
        .map(|s| aggregate(rows, s, p * s.count_ones() as f64).objective(p * s.count_ones() as f64))
        .reduce(|| 0.0, f64::max);
    best / (n * n) as f64
}

/// Alternating best-response search from several deterministic seeds.
fn greedy_lower(x: &GraphConfig, p: f64) -> f64 {
    let n = x.n();
    let rows = x.rows();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let best_t = |s: u64, sign: f64| -> (u64, f64) {
        let t = p * s.count_ones() as f64;
        let mut set = 0u64;
        let mut val = 0.0;
        for (v, &r) in rows.iter().enumerate() {
            let c = sign * ((r & s).count_ones() as f64 - t);
            if c > 0.0 {
                set |= 1 << v;
                val += c;
            }
        }
        (set, val)
    };
    let mut seeds: Vec<u64> = vec![full];
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(x.degree(v)), v));
    seeds.push(by_degree[..n / 2].iter().fold(0, |m, &v| m | 1 << v));
    seeds.push(by_degree[n / 2..].iter().fold(0, |m, &v| m | 1 << v));
    seeds.extend((0..n).map(|v| rows[v] | 1 << v));
    seeds.extend((0..n).map(|v| full & !rows[v]));
    let mut best = 0.0f64;
    for sign in [1.0, -1.0] {
        for &seed in &seeds {
            let mut s = seed;
            let mut last = -1.0;
            for _ in 0..50 {
                let (t, v) = best_t(s, sign);
                best = best.max(v);
                let (s2, v2) = best_t(t, sign);
                best = best.max(v2);
                if v2 <= last || s2 == s {
                    break;
                }
                last = v2;
                s = s2;
            }
        }
    }
    best / (n * n) as f64
}

/// Exact value for n ≤ `exact_max_n`; otherwise a greedy lower bound with
/// the trivial upper bound max(p, 1−p).
pub fn cut_norm_to_constant(x: &GraphConfig, p: f64, exact_max_n: usize) -> Result<CutNormBound> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("constant graphon value {p} outside [0,1]"));
    }
    if x.n() == 0 {
        return Ok(CutNormBound { lower: 0.0, upper: 0.0, exact: true });
    }
    if x.n() <= exact_max_n.min(24) {
        let v = exact_scan(x, p);
        return Ok(CutNormBound { lower: v, upper: v, exact: true });
    }
    Ok(CutNormBound { lower: greedy_lower(x, p), upper: p.max(1.0 - p), exact: false })
}

/// Maintains the exact cut distance to W_p under single-edge flips.
#[derive(Debug, Clone)]
pub struct CutTracker {
    graph: GraphConfig,
    p: f64,
    aggregates: Vec<Aggregate>,
}

impl CutTracker {
    pub fn new(x: &GraphConfig, p: f64, exact_max_n: usize) -> Result<Self> {
        if x.n() > exact_max_n.min(24) {
            return invalid(format!("incremental cut norm needs n ≤ {}, got {}", exact_max_n.min(24), x.n()));
        }
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("constant graphon value {p} outside [0,1]"));
        }
        let rows = x.rows();
        let aggregates = (0..1u64 << x.n()).map(|s| aggregate(rows, s, p * s.count_ones() as f64)).collect();
        Ok(Self { graph: x.clone(), p, aggregates })
    }

    pub fn graph(&self) -> &GraphConfig {
        &self.graph
    }

    pub fn value(&self) -> f64 {
        let n = self.graph.n();
        let best = self
            .aggregates
            .iter()
            .enumerate()
            .map(|(s, a)| a.objective(self.p * (s as u64).count_ones() as f64))
            .fold(0.0, f64::max);
        best / (n * n) as f64
    }

    /// Toggles the edge {u, v} and updates every affected subset.
    pub fn flip(&mut self, u: usize, v: usize) {
        let old_u = self.graph.row(u);
        let old_v = self.graph.row(v);
        self.graph.toggle(u, v);
        let new_u = self.graph.row(u);
        let new_v = self.graph.row(v);
        let p = self.p;
        for (s, a) in self.aggregates.iter_mut().enumerate() {
            let s = s as u64;
            let (has_u, has_v) = (s >> u & 1 == 1, s >> v & 1 == 1);
            if !has_u && !has_v {
                continue;
            }
            let t = p * s.count_ones() as f64;
            if has_v {
                a.add((old_u & s).count_ones(), t, -1);
                a.add((new_u & s).count_ones(), t, 1);
            }
            if has_u {
                a.add((old_v & s).count_ones(), t, -1);
                a.add((new_v & s).count_ones(), t, 1);
            }
        }
    }
}

/// {W : d(W, W_{p*}) ≤ η}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutBall {
    pub p_star: f64,
    pub eta: f64,
    pub exact_mode_max_n: usize,
}

impl CutBall {
    pub fn new(p_star: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_star) {
            return invalid(format!("p* = {p_star} outside [0,1]"));
        }
        if !(eta > 0.0) {
            return invalid(format!("ball radius must be positive, got {eta}"));
        }
        Ok(Self { p_star, eta, exact_mode_max_n: DEFAULT_EXACT_MAX_N })
    }

    /// Exact membership; rejected when n exceeds the exact-mode limit.
    pub fn contains(&self, x: &GraphConfig) -> Result<bool> {
        if x.n() > self.exact_mode_max_n {
            return invalid(format!("exact cut-ball membership needs n ≤ {}, got {}", self.exact_mode_max_n, x.n()));
        }
        Ok(cut_norm_to_constant(x, self.p_star, self.exact_mode_max_n)?.value() <= self.eta)
    }
}

/// Balls around distinct p* are disjoint when |p_a − p_b| > 2η.
pub fn check_balls_disjoint(balls: &[CutBall]) -> Result<()> {
    for (i, a) in balls.iter().enumerate() {
        for b in &balls[i + 1..] {
            if (a.p_star - b.p_star).abs() <= a.eta + b.eta {
                return invalid(format!(
                    "cut balls around p*={} and p*={} overlap (radii {} and {})",
                    a.p_star, b.p_star, a.eta, b.eta
                ));
            }
        }
    }
    Ok(())
}
