//! The good set Γ(ε): graphs whose edge-rooted statistics r_G(x, e) lie
//! within ε of p* for every probe graph G and every potential edge e.

use serde::Serialize;

use super::catalog::probe_family;
use super::graph::GraphConfig;
use super::hom::{edge_derivative, r_from_derivative, SmallGraph};
use crate::error::{invalid, rejected, Result};

#[derive(Debug, Clone, Serialize)]
pub struct GoodSet {
    pub p_star: f64,
    pub epsilon: f64,
    pub v_max: usize,
    #[serde(skip)]
    pub probes: Vec<SmallGraph>,
}

impl GoodSet {
    /// Probe family: connected catalog graphs with 3..=v_max vertices.
    pub fn new(p_star: f64, epsilon: f64, v_max: usize) -> Result<Self> {
        if !(2..=5).contains(&v_max) {
            return invalid(format!("probe catalog covers 2..=5 vertices, got v_max={v_max}"));
        }
        if !(epsilon > 0.0) {
            return invalid(format!("epsilon must be positive, got {epsilon}"));
        }
        Ok(Self { p_star, epsilon, v_max, probes: probe_family(v_max) })
    }

    pub fn contains(&self, x: &GraphConfig) -> bool {
        gamma_membership(x, self).member
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaReport {
    pub worst_deviation: f64,
    /// (probe name, u, v) attaining the worst deviation.
    pub offending: Option<(String, usize, usize)>,
    pub member: bool,
}

pub fn gamma_membership(x: &GraphConfig, gs: &GoodSet) -> GammaReport {
    let n = x.n();
    let mut worst = 0.0f64;
    let mut offending = None;
    for g in &gs.probes {
        for u in 0..n {
            for v in u + 1..n {
                let r = r_from_derivative(g, n, edge_derivative(g, x, u, v));
                let d = (r - gs.p_star).abs();
                if d > worst || offending.is_none() {
                    worst = worst.max(d);
                    offending = Some((g.name.clone(), u, v));
                }
            }
        }
    }
    GammaReport { worst_deviation: worst, offending, member: worst <= gs.epsilon }
}

/// Circulant graph on Z_n with the given connection set (closed under
/// negation by construction).
pub fn circulant(n: usize, connections: &[usize]) -> GraphConfig {
    let mut g = GraphConfig::empty(n);
    for u in 0..n {
        for &s in connections {
            let v = (u + s) % n;
            if v != u {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Deterministic search over circulant graphs for a member of Γ; returns
/// the member with the smallest worst deviation.
pub fn circulant_gamma_member(gs: &GoodSet, n: usize) -> Result<(GraphConfig, GammaReport)> {
    if !(5..=64).contains(&n) {
        return invalid(format!("circulant search needs 5 ≤ n ≤ 64, got {n}"));
    }
    let half = (n - 1) / 2;
    let target = gs.p_star * (n - 1) as f64;
    let mut best: Option<(GraphConfig, GammaReport)> = None;
    let limit: u64 = 1 << half.min(20);
    for mask in 1..limit {
        for with_antipode in [false, true] {
            if with_antipode && n % 2 == 1 {
                continue;
            }
            let mut conn: Vec<usize> = (0..half).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let deg = 2 * conn.len() + with_antipode as usize;
            if (deg as f64 - target).abs() > gs.epsilon * n as f64 + 2.0 {
                continue;
            }
            if with_antipode {
                conn.push(n / 2);
            }
            let g = circulant(n, &conn);
            let rep = gamma_membership(&g, gs);
            if best.as_ref().is_none_or(|(_, b)| rep.worst_deviation < b.worst_deviation) {
                best = Some((g, rep));
            }
        }
    }
    match best {
        Some((g, rep)) if rep.member => Ok((g, rep)),
        Some((_, rep)) => rejected(format!("no circulant member of Γ found; best worst deviation {}", rep.worst_deviation)),
        None => rejected("no circulant candidate near the target degree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_deviation() {
        let gs = GoodSet { p_star: 1.0, epsilon: 0.05, v_max: 3, probes: vec![SmallGraph::triangle()] };
        let rep = gamma_membership(&GraphConfig::complete(30), &gs);
        assert!((rep.worst_deviation - (1.0 - (28.0f64 / 30.0).sqrt())).abs() < 1e-12);
        assert!(rep.member);
        let empty = gamma_membership(&GraphConfig::empty(10), &GoodSet::new(0.5, 0.1, 3).unwrap());
        assert!(!empty.member);
        assert!((empty.worst_deviation - 0.5).abs() < 1e-15);
    }
}
