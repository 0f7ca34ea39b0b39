//! Local FKG scan for conditioned ERGMs and the homomorphism-count
//! superadditivity N_G(x∨y) + N_G(x∧y) ≥ N_G(x) + N_G(y).

use rand::Rng;
use rayon::prelude::*;

use super::graph::{edge_count_of, edge_endpoints, GraphConfig};
use super::hom::{count_homomorphisms, SmallGraph};
use super::model::{Conditioning, ErgmSpec};
use crate::error::{invalid, Result};
use crate::gcwm::{LocalFkgReport, ScanMode};
use crate::lattice::SpinConfig;

/// N_G(x∨y) + N_G(x∧y) − N_G(x) − N_G(y).
pub fn superadditivity_gap(g: &SmallGraph, x: &GraphConfig, y: &GraphConfig) -> i64 {
    let n = x.n();
    let mut meet = GraphConfig::empty(n);
    let mut join = GraphConfig::empty(n);
    for (u, v) in edge_endpoints(n) {
        let (a, b) = (x.has_edge(u, v), y.has_edge(u, v));
        meet.set_edge(u, v, a && b);
        join.set_edge(u, v, a || b);
    }
    let c = |h: &GraphConfig| count_homomorphisms(g, h) as i64;
    c(&join) + c(&meet) - c(x) - c(y)
}

/// Minimum of log μ(x∨y) + log μ(x∧y) − log μ(x) − log μ(y) over pairs with
/// x, y in the support and within Hamming distance 1 of Λ, and
/// min(|x∖y|, |y∖x|) ≤ 1. `support` conditions μ; `lambda` is Λ.
pub fn local_fkg_witness_ergm<R: Rng + ?Sized>(
    spec: &ErgmSpec,
    support: &Conditioning,
    lambda: &Conditioning,
    mode: ScanMode,
    rng: &mut R,
) -> Result<LocalFkgReport> {
    match mode {
        ScanMode::Exhaustive => exhaustive(spec, support, lambda),
        ScanMode::Sampled { pairs } => sampled(spec, support, lambda, pairs, rng),
    }
}

fn exhaustive(spec: &ErgmSpec, support: &Conditioning, lambda: &Conditioning) -> Result<LocalFkgReport> {
    let n = spec.n;
    if n > 6 {
        return invalid(format!("exhaustive ERGM local FKG scan needs n ≤ 6, got {n}"));
    }
    let dim = edge_count_of(n);
    let size = 1u64 << dim;
    let tables: Vec<(Vec<u64>, f64, bool, bool)> = (0..size)
        .into_par_iter()
        .map(|i| {
            let g = GraphConfig::from_index(n, i);
            let counts: Vec<u64> = spec.graphs.iter().map(|h| count_homomorphisms(h, &g)).collect();
            (counts, spec.log_weight(&g), support.contains(&g), lambda.contains(&g))
        })
        .collect();
    let lw: Vec<f64> = tables.iter().map(|t| if t.2 { t.1 } else { f64::NEG_INFINITY }).collect();
    let in_lambda: Vec<bool> = tables.iter().map(|t| t.3).collect();
    let near: Vec<bool> = (0..size as usize)
        .map(|i| in_lambda[i] || (0..dim).any(|k| in_lambda[i ^ (1 << k)]))
        .collect();
    let counts: Vec<&[u64]> = tables.iter().map(|t| t.0.as_slice()).collect();
    let full = size - 1;
    // Ordered pairs with |x∖y| ≤ 1 cover every admissible unordered pair.
    let partials: Vec<LocalFkgReport> = (0..size)
        .into_par_iter()
        .filter(|&x| near[x as usize] && lw[x as usize] > f64::NEG_INFINITY)
        .map(|x| {
            let mut rep = empty_report(true);
            let free = full & !x;
            let mut drops = vec![None];
            drops.extend((0..dim).filter(|k| x >> k & 1 == 1).map(Some));
            for drop in drops {
                let base = match drop {
                    Some(k) => x & !(1u64 << k),
                    None => x,
                };
                // y = base ∪ A with A ⊆ free, plus (when nothing is dropped)
                // all supersets; with a drop, y must avoid the dropped bit.
                let mut a = free;
                loop {
                    let y = base | a;
                    visit(dim, x, y, &lw, &near, &counts, &mut rep);
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & free;
                }
            }
            rep
        })
        .collect();
    let mut report = empty_report(true);
    for p in partials {
        merge(&mut report, p);
    }
    Ok(report)
}

fn visit(dim: usize, x: u64, y: u64, lw: &[f64], near: &[bool], counts: &[&[u64]], rep: &mut LocalFkgReport) {
    if !near[y as usize] || lw[y as usize] == f64::NEG_INFINITY {
        return;
    }
    let (m, j) = ((x & y) as usize, (x | y) as usize);
    rep.pairs_checked += 1;
    for g in 0..counts[0].len() {
        rep.superadditivity_checked += 1;
        if counts[j][g] + counts[m][g] < counts[x as usize][g] + counts[y as usize][g] {
            rep.superadditivity_violations += 1;
        }
    }
    let r = lw[j] + lw[m] - lw[x as usize] - lw[y as usize];
    let r = if r.is_nan() { f64::NEG_INFINITY } else { r };
    if r < rep.min_log_ratio {
        rep.min_log_ratio = r;
        rep.witness = Some((SpinConfig::from_index(dim, x), SpinConfig::from_index(dim, y)));
    }
}

fn empty_report(exhaustive: bool) -> LocalFkgReport {
    LocalFkgReport {
        min_log_ratio: f64::INFINITY,
        witness: None,
        pairs_checked: 0,
        superadditivity_checked: 0,
        superadditivity_violations: 0,
        exhaustive,
    }
}

fn merge(into: &mut LocalFkgReport, p: LocalFkgReport) {
    into.pairs_checked += p.pairs_checked;
    into.superadditivity_checked += p.superadditivity_checked;
    into.superadditivity_violations += p.superadditivity_violations;
    if p.min_log_ratio < into.min_log_ratio {
        into.min_log_ratio = p.min_log_ratio;
        into.witness = p.witness;
    }
}

fn sampled<R: Rng + ?Sized>(
    spec: &ErgmSpec,
    support: &Conditioning,
    lambda: &Conditioning,
    pairs: u64,
    rng: &mut R,
) -> Result<LocalFkgReport> {
    let n = spec.n;
    let p = match lambda {
        Conditioning::Ball(b) => b.p_star,
        Conditioning::Proxy { p_star, .. } => *p_star,
        Conditioning::Gamma(g) => g.p_star,
        Conditioning::None => 0.5,
    };
    let mut rep = empty_report(false);
    let mut attempts = 0u64;
    while rep.pairs_checked < pairs {
        attempts += 1;
        if attempts > pairs.saturating_mul(1000).max(10_000) {
            return crate::error::rejected("could not draw admissible pairs near Λ");
        }
        let x = GraphConfig::erdos_renyi(n, p, rng);
        if !lambda.contains(&x) || !support.contains(&x) {
            continue;
        }
        let mut y = x.clone();
        let edges = x.edges();
        if !edges.is_empty() && rng.random::<bool>() {
            let (u, v) = edges[rng.random_range(0..edges.len())];
            y.set_edge(u, v, false);
        }
        for (u, v) in edge_endpoints(n) {
            if !x.has_edge(u, v) && rng.random::<f64>() < 0.1 {
                y.set_edge(u, v, true);
            }
        }
        let near_y = lambda.contains(&y)
            || edge_endpoints(n).into_iter().any(|(u, v)| {
                let mut z = y.clone();
                z.toggle(u, v);
                lambda.contains(&z)
            });
        if !near_y || !support.contains(&y) {
            continue;
        }
        rep.pairs_checked += 1;
        for g in &spec.graphs {
            rep.superadditivity_checked += 1;
            if superadditivity_gap(g, &x, &y) < 0 {
                rep.superadditivity_violations += 1;
            }
        }
        let (mut meet, mut join) = (GraphConfig::empty(n), GraphConfig::empty(n));
        for (u, v) in edge_endpoints(n) {
            meet.set_edge(u, v, x.has_edge(u, v) && y.has_edge(u, v));
            join.set_edge(u, v, x.has_edge(u, v) || y.has_edge(u, v));
        }
        let w = |g: &GraphConfig| if support.contains(g) { spec.log_weight(g) } else { f64::NEG_INFINITY };
        let r = w(&join) + w(&meet) - w(&x) - w(&y);
        if r < rep.min_log_ratio {
            rep.min_log_ratio = r;
            rep.witness = Some((x.to_spin(), y.to_spin()));
        }
    }
    Ok(rep)
}
