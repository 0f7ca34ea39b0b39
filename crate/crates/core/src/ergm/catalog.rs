//! Catalog of connected pattern graphs with 3 to 5 vertices and no isolated
//! vertices, one representative per isomorphism class. Each entry is the
//! lexicographically smallest sorted edge list over all vertex relabelings.

use super::hom::SmallGraph;

static CATALOG: &[(usize, &[(usize, usize)])] = &[
    (3, &[(0, 1), (0, 2)]),
    (3, &[(0, 1), (0, 2), (1, 2)]),
    (4, &[(0, 1), (0, 2), (0, 3)]),
    (4, &[(0, 1), (0, 2), (1, 3)]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2)]),
    (4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 4)]),
    (5, &[(0, 1), (0, 2), (1, 3), (2, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4)]),
    (5, &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 4), (3, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
];

/// All catalog graphs with at most `max_vertices` vertices (and ≥ 2 edges).
pub fn probe_family(max_vertices: usize) -> Vec<SmallGraph> {
    let mut counters = [0usize; 6];
    CATALOG
        .iter()
        .filter(|(v, _)| *v <= max_vertices)
        .map(|&(v, edges)| {
            counters[v] += 1;
            let name = match (v, edges.len()) {
                (3, 2) => "wedge".to_string(),
                (3, 3) => "triangle".to_string(),
                _ => format!("g{v}_{}", counters[v]),
            };
            SmallGraph::new(name, v, edges.to_vec()).expect("catalog entries are valid")
        })
        .collect()
}

/// Canonical form: the smallest sorted edge list over all relabelings.
pub fn canonical_form(vertices: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..vertices).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (perm[a], perm[b]);
                (p.min(q), p.max(q))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regenerate(v: usize) -> Vec<Vec<(usize, usize)>> {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if edges.len() < 2 {
                continue;
            }
            let g = SmallGraph::new("candidate", v, edges.clone()).unwrap();
            if !g.is_connected() {
                continue;
            }
            let c = canonical_form(v, &edges);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn embedded_catalog_matches_regeneration() {
        for (v, count) in [(3, 2), (4, 6), (5, 21)] {
            let fresh = regenerate(v);
            assert_eq!(fresh.len(), count);
            let embedded: Vec<Vec<(usize, usize)>> =
                CATALOG.iter().filter(|(w, _)| *w == v).map(|(_, e)| e.to_vec()).collect();
            assert_eq!(embedded, fresh);
        }
        assert_eq!(probe_family(3).len(), 2);
        assert_eq!(probe_family(5).len(), 29);
        assert!(probe_family(5).iter().all(|g| g.is_connected() && !g.has_isolated_vertex()));
    }
}
