//! Homomorphism counts N_G(x) of small pattern graphs G in a host graph x,
//! densities t(G,x) = N_G(x)/n^{|V(G)|}, and edge-rooted increments
//! ∂_e N_G(x) = N_G(x^{+e}) − N_G(x^{−e}).

use serde::Serialize;

use super::graph::GraphConfig;
use crate::error::{invalid, Result};

/// Largest pattern size accepted by the brute-force counters.
pub const MAX_PATTERN_VERTICES: usize = 6;

/// A small pattern graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallGraph {
    pub name: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Edge,
    Wedge,
    Triangle,
    General,
}

impl SmallGraph {
    pub fn new(name: impl Into<String>, vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 || vertices > MAX_PATTERN_VERTICES {
            return invalid(format!(
                "pattern graphs need 1..={MAX_PATTERN_VERTICES} vertices, got {vertices}; larger patterns need density sampling"
            ));
        }
        let mut seen = Vec::new();
        for &(a, b) in &edges {
            if a == b || a >= vertices || b >= vertices {
                return invalid(format!("invalid pattern edge ({a}, {b})"));
            }
            let key = (a.min(b), a.max(b));
            if seen.contains(&key) {
                return invalid(format!("duplicate pattern edge ({a}, {b})"));
            }
            seen.push(key);
        }
        seen.sort_unstable();
        Ok(Self { name: name.into(), vertices, edges: seen })
    }

    pub fn edge() -> Self {
        Self::new("edge", 2, vec![(0, 1)]).unwrap()
    }

    /// Path with two edges.
    pub fn wedge() -> Self {
        Self::new("wedge", 3, vec![(0, 1), (1, 2)]).unwrap()
    }

    pub fn triangle() -> Self {
        Self::new("triangle", 3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    pub fn path(edges: usize) -> Self {
        Self::new(format!("path{edges}"), edges + 1, (0..edges).map(|i| (i, i + 1)).collect()).unwrap()
    }

    pub fn cycle(k: usize) -> Self {
        Self::new(format!("cycle{k}"), k, (0..k).map(|i| (i, (i + 1) % k)).collect()).unwrap()
    }

    pub fn star(leaves: usize) -> Self {
        Self::new(format!("star{leaves}"), leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap()
    }

    pub fn complete(k: usize) -> Self {
        let mut e = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                e.push((a, b));
            }
        }
        Self::new(format!("K{k}"), k, e).unwrap()
    }

    /// Looks up a named pattern: edge, wedge, triangle, pathK, cycleK,
    /// starK, KK.
    pub fn by_name(name: &str) -> Result<Self> {
        let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
        match name {
            "edge" => return Ok(Self::edge()),
            "wedge" => return Ok(Self::wedge()),
            "triangle" => return Ok(Self::triangle()),
            _ => {}
        }
        let g = if let Some(k) = num("path") {
            (1..MAX_PATTERN_VERTICES).contains(&k).then(|| Self::path(k))
        } else if let Some(k) = num("cycle") {
            (3..=MAX_PATTERN_VERTICES).contains(&k).then(|| Self::cycle(k))
        } else if let Some(k) = num("star") {
            (1..MAX_PATTERN_VERTICES).contains(&k).then(|| Self::star(k))
        } else if let Some(k) = num("K") {
            (2..=MAX_PATTERN_VERTICES).contains(&k).then(|| Self::complete(k))
        } else {
            None
        };
        g.map_or_else(|| invalid(format!("unknown pattern graph '{name}'")), Ok)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u32;
        loop {
            let mut next = seen;
            for &(a, b) in &self.edges {
                if seen >> a & 1 == 1 || seen >> b & 1 == 1 {
                    next |= 1 << a | 1 << b;
                }
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen.count_ones() as usize == self.vertices
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.vertices).any(|v| !self.edges.iter().any(|&(a, b)| a == v || b == v))
    }

    fn shape(&self) -> Shape {
        match (self.vertices, self.edges.len()) {
            (2, 1) => Shape::Edge,
            (3, 2) => Shape::Wedge,
            (3, 3) => Shape::Triangle,
            _ => Shape::General,
        }
    }

    fn neighbour_masks(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.vertices];
        for &(a, b) in &self.edges {
            m[a] |= 1 << b;
            m[b] |= 1 << a;
        }
        m
    }
}

/// Exact N_G(x): the number of maps V(G) → [n] sending edges to edges.
pub fn count_homomorphisms(g: &SmallGraph, x: &GraphConfig) -> u64 {
    match g.shape() {
        Shape::Edge => 2 * x.edge_count() as u64,
        Shape::Wedge => (0..x.n()).map(|v| (x.degree(v) as u64).pow(2)).sum(),
        Shape::Triangle => {
            // Each triangle is seen once from each of its edges.
            let s: u64 = x.edges().iter().map(|&(u, v)| x.codegree(u, v) as u64).sum();
            2 * s
        }
        Shape::General => {
            let plan = Plan::new(g, &[]);
            plan.count(x, &mut vec![usize::MAX; g.vertices], 0, &[])
        }
    }
}

/// t(G, x) = N_G(x) / n^{|V(G)|}.
pub fn hom_density(g: &SmallGraph, x: &GraphConfig) -> f64 {
    count_homomorphisms(g, x) as f64 / (x.n() as f64).powi(g.vertices as i32)
}

/// ∂_e N_G(x) for e = {u, v}: homomorphisms into x^{+e} that use e.
pub fn edge_derivative(g: &SmallGraph, x: &GraphConfig, u: usize, v: usize) -> u64 {
    match g.shape() {
        Shape::Edge => 2,
        Shape::Wedge => {
            let e = x.has_edge(u, v) as u32;
            2 * ((x.degree(u) - e) + (x.degree(v) - e)) as u64 + 2
        }
        Shape::Triangle => 6 * x.codegree(u, v) as u64,
        Shape::General => rooted_general(g, x, u, v),
    }
}

/// Rooted count by the first pattern edge mapped onto e: for pattern edge k
/// in either orientation, count homomorphisms into x^{+e} sending edge k to
/// e and no earlier pattern edge to e.
fn rooted_general(g: &SmallGraph, x: &GraphConfig, u: usize, v: usize) -> u64 {
    let mut host = x.clone();
    host.set_edge(u, v, true);
    let mut total = 0;
    for k in 0..g.edges.len() {
        let (a, b) = g.edges[k];
        let forbidden = &g.edges[..k];
        for (fa, fb) in [(u, v), (v, u)] {
            let plan = Plan::new(g, &[a, b]);
            let mut assign = vec![usize::MAX; g.vertices];
            assign[a] = fa;
            assign[b] = fb;
            total += plan.count(&host, &mut assign, 0, &[(u.min(v), u.max(v), forbidden)]);
        }
    }
    total
}

struct Plan {
    order: Vec<usize>,
    nb: Vec<u32>,
}

type Forbid<'a> = (usize, usize, &'a [(usize, usize)]);

impl Plan {
    fn new(g: &SmallGraph, fixed: &[usize]) -> Self {
        let nb = g.neighbour_masks();
        let mut placed: u32 = fixed.iter().fold(0, |m, &v| m | 1 << v);
        let mut order = Vec::new();
        for _ in 0..g.vertices - fixed.len() {
            let next = (0..g.vertices)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| ((nb[v] & placed).count_ones(), nb[v].count_ones(), std::cmp::Reverse(v)))
                .unwrap();
            order.push(next);
            placed |= 1 << next;
        }
        Self { order, nb }
    }

    fn count(&self, x: &GraphConfig, assign: &mut [usize], depth: usize, forbid: &[Forbid<'_>]) -> u64 {
        if depth == 0 && !self.forbidden_ok(assign, forbid) {
            return 0;
        }
        if depth == self.order.len() {
            return 1;
        }
        let w = self.order[depth];
        let all = if x.n() == 64 { u64::MAX } else { (1u64 << x.n()) - 1 };
        let mut cand = all;
        let mut nb = self.nb[w];
        while nb != 0 {
            let z = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if assign[z] != usize::MAX {
                cand &= x.row(assign[z]);
            }
        }
        if depth + 1 == self.order.len() && forbid.is_empty() {
            return cand.count_ones() as u64;
        }
        let mut total = 0;
        while cand != 0 {
            let t = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            assign[w] = t;
            if self.forbidden_ok(assign, forbid) {
                total += self.count(x, assign, depth + 1, forbid);
            }
        }
        assign[w] = usize::MAX;
        total
    }

    /// No forbidden pattern edge with both ends assigned lands on the root.
    fn forbidden_ok(&self, assign: &[usize], forbid: &[Forbid<'_>]) -> bool {
        for &(lo, hi, edges) in forbid {
            for &(a, b) in edges {
                let (p, q) = (assign[a], assign[b]);
                if p != usize::MAX && q != usize::MAX && p.min(q) == lo && p.max(q) == hi {
                    return false;
                }
            }
        }
        true
    }
}

/// r_G(x, e) = (∂_e N_G(x) / (2|E| n^{|V|−2}))^{1/(|E|−1)}.
pub fn r_statistic(g: &SmallGraph, x: &GraphConfig, u: usize, v: usize) -> Result<f64> {
    let e = g.edge_count();
    if e < 2 {
        return invalid(format!("r statistic needs at least two pattern edges, '{}' has {e}", g.name));
    }
    if u == v || u >= x.n() || v >= x.n() {
        return invalid(format!("({u}, {v}) is not a potential edge"));
    }
    Ok(r_from_derivative(g, x.n(), edge_derivative(g, x, u, v)))
}

pub(crate) fn r_from_derivative(g: &SmallGraph, n: usize, d: u64) -> f64 {
    let e = g.edge_count();
    let base = d as f64 / (2.0 * e as f64 * (n as f64).powi(g.vertices as i32 - 2));
    if e == 2 {
        base
    } else if e == 3 {
        base.sqrt()
    } else {
        base.powf(1.0 / (e - 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_paths_match_general_counter() {
        let x = GraphConfig::from_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (1, 4), (4, 5)]).unwrap();
        for g in [SmallGraph::wedge(), SmallGraph::triangle(), SmallGraph::edge()] {
            let plan = Plan::new(&g, &[]);
            let general = plan.count(&x, &mut vec![usize::MAX; g.vertices], 0, &[]);
            assert_eq!(count_homomorphisms(&g, &x), general, "{}", g.name);
            for u in 0..6 {
                for v in u + 1..6 {
                    assert_eq!(edge_derivative(&g, &x, u, v), rooted_general(&g, &x, u, v), "{} {u}{v}", g.name);
                }
            }
        }
    }

    #[test]
    fn triangle_in_k3_and_k10() {
        assert_eq!(count_homomorphisms(&SmallGraph::triangle(), &GraphConfig::complete(3)), 6);
        let k10 = GraphConfig::complete(10);
        assert!((hom_density(&SmallGraph::triangle(), &k10) - 0.72).abs() < 1e-15);
        assert!((r_statistic(&SmallGraph::triangle(), &k10, 2, 7).unwrap() - 0.8f64.sqrt()).abs() < 1e-15);
        assert!(r_statistic(&SmallGraph::edge(), &k10, 0, 1).is_err());
    }
}
