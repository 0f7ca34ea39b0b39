use std::fmt;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::lattice::SpinConfig;

/// Largest vertex count supported by the adjacency-row representation.
pub const MAX_VERTICES: usize = 64;

/// Number of potential edges C(n,2).
pub fn edge_count_of(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the unordered pair {u, v}, u ≠ v, in lexicographic order of
/// (min, max).
#[inline]
pub fn edge_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Endpoints (u < v) of every edge index.
pub fn edge_endpoints(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(edge_count_of(n));
    for u in 0..n {
        for v in u + 1..n {
            out.push((u, v));
        }
    }
    out
}

/// A simple graph on n ≤ 64 labelled vertices, stored as adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GraphConfig {
    n: usize,
    adj: Vec<u64>,
    edges: usize,
}

impl GraphConfig {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graphs are limited to {MAX_VERTICES} vertices");
        Self { n, adj: vec![0; n], edges: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// Erdős–Rényi G(n, p).
    pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return invalid(format!("graphs are limited to {MAX_VERTICES} vertices, got {n}"));
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return invalid(format!("invalid edge ({u}, {v}) for n={n}"));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn row(&self, u: usize) -> u64 {
        self.adj[u]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, u: usize) -> u32 {
        self.adj[u].count_ones()
    }

    /// Number of common neighbours of u and v.
    #[inline]
    pub fn codegree(&self, u: usize, v: usize) -> u32 {
        (self.adj[u] & self.adj[v]).count_ones()
    }

    /// Sets the edge and returns its previous value.
    #[inline]
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) -> bool {
        debug_assert!(u != v);
        let old = self.has_edge(u, v);
        if old != present {
            self.adj[u] ^= 1 << v;
            self.adj[v] ^= 1 << u;
            if present {
                self.edges += 1;
            } else {
                self.edges -= 1;
            }
        }
        old
    }

    pub fn toggle(&mut self, u: usize, v: usize) {
        let old = self.has_edge(u, v);
        self.set_edge(u, v, !old);
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    /// Sorted edge list with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n {
            let mut r = self.adj[u] >> (u + 1) << (u + 1);
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                out.push((u, v));
                r &= r - 1;
            }
        }
        out
    }

    /// Binary configuration over the C(n,2) potential edges.
    pub fn to_spin(&self) -> SpinConfig {
        let mut x = SpinConfig::zeros(2, edge_count_of(self.n));
        for (u, v) in self.edges() {
            x.set(edge_index(self.n, u, v), 1);
        }
        x
    }

    pub fn from_spin(n: usize, x: &SpinConfig) -> Result<Self> {
        if x.dimension() != edge_count_of(n) || !x.is_binary() {
            return invalid(format!("configuration of dimension {} is not a graph on {n} vertices", x.dimension()));
        }
        let mut g = Self::empty(n);
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if x.get(idx) == 1 {
                    g.set_edge(u, v, true);
                }
                idx += 1;
            }
        }
        Ok(g)
    }

    /// Graph whose edge k (in [`edge_index`] order) is bit k of `index`;
    /// needs C(n,2) ≤ 64.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(edge_count_of(n) <= 64);
        let mut g = Self::empty(n);
        let mut bits = index;
        for (u, v) in edge_endpoints(n) {
            if bits & 1 == 1 {
                g.set_edge(u, v, true);
            }
            bits >>= 1;
        }
        g
    }

    pub fn to_index(&self) -> Option<u64> {
        if edge_count_of(self.n) > 64 {
            return None;
        }
        Some(self.edges().iter().fold(0u64, |m, &(u, v)| m | 1 << edge_index(self.n, u, v)))
    }

    /// Sorted edge-list text, one "u v" line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|_| crate::Error::InvalidInput(format!("line {}: bad vertex '{s}'", lineno + 1)));
            if parts.len() != 2 {
                return invalid(format!("line {}: expected 'u v'", lineno + 1));
            }
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            if u >= v {
                return invalid(format!("line {}: expected u < v", lineno + 1));
            }
            edges.push((u, v));
        }
        Self::from_edges(n, &edges)
    }
}

impl fmt::Debug for GraphConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphConfig(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_indexing_is_a_bijection() {
        let n = 7;
        let ends = edge_endpoints(n);
        assert_eq!(ends.len(), 21);
        for (k, &(u, v)) in ends.iter().enumerate() {
            assert_eq!(edge_index(n, u, v), k);
            assert_eq!(edge_index(n, v, u), k);
        }
    }

    #[test]
    fn spin_round_trip_and_edge_list() {
        let g = GraphConfig::from_edges(5, &[(0, 1), (2, 4), (1, 3)]).unwrap();
        let x = g.to_spin();
        assert_eq!(GraphConfig::from_spin(5, &x).unwrap(), g);
        let text = g.to_edge_list();
        assert_eq!(text, "0 1\n1 3\n2 4\n");
        assert_eq!(GraphConfig::parse_edge_list(5, &text).unwrap(), g);
        assert!(GraphConfig::parse_edge_list(5, "3 1\n").is_err());
        assert_eq!(g.complement().edge_count(), 7);
    }
}
