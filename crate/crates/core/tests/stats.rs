use phasefkg::ergm::{ErgmSpec, GraphConfig, SmallGraph};
use phasefkg::fkg::exact_defect;
use phasefkg::gcwm::{GcwmMeasure, GcwmParams, PhaseBand};
use phasefkg::glauber::{ExactTable, MeasureSpec};
use phasefkg::lattice::{IncreasingFunction, SpinConfig};
use phasefkg::numeric::{normal_cdf, normal_quantile};
use phasefkg::rng::SeedStream;
use phasefkg::stats::*;
use proptest::prelude::*;
use rand::Rng;

fn binomial_atoms(n: usize) -> Vec<(f64, f64)> {
    let mut logc = 0.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                logc += ((n - k + 1) as f64).ln() - (k as f64).ln();
            }
            (k as f64, (logc - n as f64 * std::f64::consts::LN_2).exp())
        })
        .collect()
}

/// ∫|F − Φ| by the midpoint rule on a fine grid.
fn wasserstein_by_quadrature(atoms: &[(f64, f64)], center: f64, scale: f64) -> f64 {
    let (lo, hi, steps) = (-12.0, 12.0, 2_400_000);
    let h = (hi - lo) / steps as f64;
    let z: Vec<(f64, f64)> = atoms.iter().map(|&(v, p)| ((v - center) / scale, p)).collect();
    let mut total = 0.0;
    let mut idx = 0;
    let mut cdf = 0.0;
    for s in 0..steps {
        let x = lo + (s as f64 + 0.5) * h;
        while idx < z.len() && z[idx].0 <= x {
            cdf += z[idx].1;
            idx += 1;
        }
        total += (cdf - normal_cdf(x)).abs() * h;
    }
    total
}

#[test]
fn normal_quantiles_are_at_distance_zero() {
    let m = 1000;
    let q: Vec<f64> = (1..=m).map(|i| 2.0 + 3.0 * normal_quantile((i as f64 - 0.5) / m as f64)).collect();
    let d = normal_distance_samples(&q, 2.0, 3.0).unwrap();
    assert!(d.d_w < 1e-9, "{}", d.d_w);
    assert!((d.d_k - 0.5 / m as f64).abs() < 1e-9);
}

#[test]
fn too_few_samples_or_bad_scale_rejected() {
    let v = vec![0.0; 99];
    assert!(normal_distance_samples(&v, 0.0, 1.0).is_err());
    assert!(normal_distance_samples(&[0.0; 200], 0.0, 0.0).is_err());
    assert!(normal_distance_law(&[(0.0, 1.0)], 0.0, -1.0).is_err());
}

#[test]
fn binomial_kolmogorov_distance() {
    let atoms = binomial_atoms(100);
    let d = normal_distance_law(&atoms, 50.0, 5.0).unwrap();
    assert!((0.03..=0.05).contains(&d.d_k), "{}", d.d_k);
    let oracle = wasserstein_by_quadrature(&atoms, 50.0, 5.0);
    assert!((d.d_w - oracle).abs() < 1e-6, "{} vs {}", d.d_w, oracle);

    let pts: Vec<(f64, f64)> = [25usize, 100, 400]
        .iter()
        .map(|&n| {
            let s = (n as f64).sqrt() / 2.0;
            (n as f64, normal_distance_law(&binomial_atoms(n), n as f64 / 2.0, s).unwrap().d_k)
        })
        .collect();
    assert!(pts.windows(2).all(|w| w[1].1 < w[0].1));
    let slope = log_log_slope(&pts).unwrap();
    assert!((slope + 0.5).abs() < 0.05, "{slope}");
}

#[test]
fn sampled_distance_of_binomial_draws() {
    let mut rng = SeedStream::new(11, "binomial").replica(0);
    let draws: Vec<f64> = (0..20_000).map(|_| (0..100).filter(|_| rng.random::<bool>()).count() as f64).collect();
    let d = normal_distance_samples(&draws, 50.0, 5.0).unwrap();
    let exact = normal_distance_law(&binomial_atoms(100), 50.0, 5.0).unwrap();
    assert!((d.d_k - exact.d_k).abs() < 0.015, "{} vs {}", d.d_k, exact.d_k);
}

proptest! {
    #[test]
    fn distances_invariant_under_affine_maps(seed in 0u64..1000, a in 0.1f64..10.0, b in -5.0f64..5.0) {
        let mut rng = SeedStream::new(seed, "affine").replica(0);
        let x: Vec<f64> = (0..150).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let d1 = normal_distance_samples(&x, 0.1, 0.7).unwrap();
        let d2 = normal_distance_samples(&y, a * 0.1 + b, a * 0.7).unwrap();
        prop_assert!((d1.d_k - d2.d_k).abs() < 1e-9);
        prop_assert!((d1.d_w - d2.d_w).abs() < 1e-9);
        let atoms: Vec<(f64, f64)> = x.iter().map(|&v| (v, 1.0)).collect();
        let scaled: Vec<(f64, f64)> = y.iter().map(|&v| (v, 1.0)).collect();
        let l1 = normal_distance_law(&atoms, 0.1, 0.7).unwrap();
        let l2 = normal_distance_law(&scaled, a * 0.1 + b, a * 0.7).unwrap();
        prop_assert!((l1.d_k - l2.d_k).abs() < 1e-9);
        prop_assert!((l1.d_w - l2.d_w).abs() < 1e-9);
    }
}

fn product(ps: &[f64]) -> MeasureSpec {
    MeasureSpec::product(ps.iter().map(|p| vec![(1.0 - p).ln(), p.ln()]).collect()).unwrap()
}

#[test]
fn covariance_bound_single_coordinate() {
    let table = ExactTable::from_measure(&product(&[0.3, 0.6, 0.2])).unwrap();
    let f = IncreasingFunction::coordinate(3, 1);
    let c = cov_bound_check(CovMode::Exact(&table), &f, &f, 0.0).unwrap();
    assert!((c.lhs - 0.24).abs() < 1e-12);
    assert!((c.rhs - 0.24).abs() < 1e-12);
    assert!(c.holds && c.exact);
    let c = cov_bound_check(CovMode::Exact(&table), &f, &f, 0.1).unwrap();
    assert!((c.rhs - 0.64).abs() < 1e-12);
}

#[test]
fn covariance_bound_is_tight_for_sums_under_products() {
    let ps = [0.3, 0.6, 0.2, 0.9];
    let table = ExactTable::from_measure(&product(&ps)).unwrap();
    let sum = IncreasingFunction::new("sum", 4.0, true, |x| x.sum() as f64).with_lip_constants(vec![1.0; 4]);
    let c = cov_bound_check(CovMode::Exact(&table), &sum, &sum, 0.0).unwrap();
    let var: f64 = ps.iter().map(|p| p * (1.0 - p)).sum();
    assert!((c.lhs - var).abs() < 1e-12 && (c.rhs - var).abs() < 1e-12);
}

#[test]
fn covariance_bound_on_conditioned_mean_field_model() {
    let band = PhaseBand::new(0.5, 0.1, 0.01).unwrap();
    let mu = GcwmMeasure::new(GcwmParams::new(vec![-1.5, 1.5], 5).unwrap(), Some(band));
    let table = ExactTable::from_measure(&mu).unwrap();
    let delta = exact_defect(&mu).unwrap().delta;
    let f = IncreasingFunction::new("x1x2", 1.0, true, |x| (x.get(0) * x.get(1)) as f64);
    let g = IncreasingFunction::new("x3+x4", 2.0, true, |x| (x.get(2) + x.get(3)) as f64);
    let c = cov_bound_check(CovMode::Exact(&table), &f, &g, delta).unwrap();
    // Uniform law on the configurations with 2 or 3 ones.
    let support: Vec<u64> = (0..32u64).filter(|i| (2..=3).contains(&i.count_ones())).collect();
    let m = support.len() as f64;
    let fv = |i: u64| (i & 1 != 0 && i & 2 != 0) as u8 as f64;
    let gv = |i: u64| ((i >> 2 & 1) + (i >> 3 & 1)) as f64;
    let ef = support.iter().map(|&i| fv(i)).sum::<f64>() / m;
    let eg = support.iter().map(|&i| gv(i)).sum::<f64>() / m;
    let cov = support.iter().map(|&i| (fv(i) - ef) * (gv(i) - eg)).sum::<f64>() / m;
    assert!((c.lhs - cov.abs()).abs() < 1e-12, "{} vs {}", c.lhs, cov);
    assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
    assert!(c.slack > 0.0);
}

#[test]
fn sampled_covariance_needs_lipschitz_constants() {
    let mut rng = SeedStream::new(12, "sampled-cov").replica(0);
    let samples: Vec<SpinConfig> = (0..500)
        .map(|_| SpinConfig::from_values(2, &(0..4).map(|_| rng.random::<bool>() as u8).collect::<Vec<_>>()).unwrap())
        .collect();
    let bare = IncreasingFunction::new("sum", 4.0, true, |x| x.sum() as f64);
    assert!(cov_bound_check(CovMode::Sampled(&samples), &bare, &bare, 0.0).is_err());
    let f = bare.clone().with_lip_constants(vec![1.0; 4]);
    let c = cov_bound_check(CovMode::Sampled(&samples), &f, &f, 0.0).unwrap();
    assert!(!c.exact && c.lhs_std_error.is_some());
    assert!((c.lhs - 1.0).abs() < 0.2);
    assert!(cov_bound_check(CovMode::Sampled(&samples[..20]), &f, &f, 0.0).is_err());
    assert!(cov_bound_check(CovMode::Sampled(&samples), &f, &f, -1.0).is_err());
}

#[test]
fn mean_field_clt_at_zero_coupling() {
    let params = GcwmParams::new(vec![0.0, 0.0], 10).unwrap();
    let band = PhaseBand::new(0.5, 0.5, 0.01).unwrap();
    let r = clt_report_gcwm(&params, &band, &[40, 160]).unwrap();
    for rep in &r {
        assert!((rep.variance - rep.n as f64 / 4.0).abs() < 1e-9);
        assert!((rep.reference_variance - rep.n as f64 / 4.0).abs() < 1e-12);
        assert!((rep.center - rep.n as f64 / 2.0).abs() < 1e-9);
        assert!(rep.exact && !rep.approximate);
    }
    let direct = normal_distance_law(&binomial_atoms(160), 80.0, 40f64.sqrt()).unwrap();
    assert!((r[1].d_k - direct.d_k).abs() < 1e-12);
}

#[test]
fn mean_field_clt_in_a_symmetric_double_well() {
    let params = GcwmParams::new(vec![-3.0, 3.0], 10).unwrap();
    let analysis = params.find_maximizers(10_000, 1e-10).unwrap();
    let bands = PhaseBand::defaults(&analysis).unwrap();
    let band = bands.iter().find(|b| b.m_star > 0.5).unwrap();
    let r = clt_report_gcwm(&params, band, &[100, 200, 400, 800]).unwrap();
    assert!(r.windows(2).all(|w| w[1].d_k < w[0].d_k));
    let last = r.last().unwrap();
    assert!((0.9..=1.1).contains(&last.variance_ratio), "{}", last.variance_ratio);
}

fn er_samples(n: usize, p: f64, count: usize, seed: u64) -> Vec<GraphConfig> {
    let mut rng = SeedStream::new(seed, "er").replica(n as u64);
    (0..count).map(|_| GraphConfig::erdos_renyi(n, p, &mut rng)).collect()
}

#[test]
fn probes_vanish_on_independent_edges() {
    let s = er_samples(16, 0.3, 3000, 13);
    let pt = multilinear_deviation(&s, &EdgeSelection::AdjacentPairSymmetrized).unwrap();
    assert!(pt.deviation <= 2.0 * pt.halfwidth, "{} > 2·{}", pt.deviation, pt.halfwidth);
    let direct = EdgeSelection::Direct { edges: vec![(0, 1), (2, 3), (4, 5)], reference: Some((6, 7)) };
    let pt = multilinear_deviation(&s, &direct).unwrap();
    assert!(pt.deviation <= 2.5 * pt.halfwidth, "{} > 2.5·{}", pt.deviation, pt.halfwidth);

    // k = 1 against the edge density is an unbiased comparison of two means.
    let one = EdgeSelection::Direct { edges: vec![(0, 1)], reference: None };
    let pt = multilinear_deviation(&s, &one).unwrap();
    let x01 = s.iter().filter(|g| g.has_edge(0, 1)).count() as f64 / s.len() as f64;
    let dens = s.iter().map(|g| g.edge_count() as f64 / 120.0).sum::<f64>() / s.len() as f64;
    assert!((pt.signed_deviation - (x01 - dens)).abs() < 1e-12);
}

#[test]
fn probe_inputs_validated() {
    let s = er_samples(8, 0.5, 50, 14);
    let rep = EdgeSelection::Direct { edges: vec![(0, 1), (1, 0)], reference: None };
    assert!(multilinear_deviation(&s, &rep).is_err());
    let five = EdgeSelection::Direct { edges: vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], reference: None };
    assert!(multilinear_deviation(&s, &five).is_err());
    assert!(multilinear_deviation(&[], &EdgeSelection::AdjacentPairSymmetrized).is_err());
}

#[test]
fn marginal_probe_within_envelope_for_erdos_renyi() {
    let grids: Vec<Vec<GraphConfig>> = [10usize, 20, 40].iter().map(|&n| er_samples(n, 0.3, 400, 15)).collect();
    let refs: Vec<&[GraphConfig]> = grids.iter().map(|v| v.as_slice()).collect();
    let pts = marginal_probe(&refs, 0.3).unwrap();
    assert_eq!(pts.len(), 3);
    for p in &pts {
        assert!(p.within_envelope && p.deviation <= 3.0 * p.halfwidth.max(1e-3));
        assert!((p.envelope - ((p.n as f64).ln() / p.n as f64).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn chi_square_pools_small_cells() {
    let t = chi_square_gof(&[25, 25, 25, 25], &[0.25; 4]).unwrap();
    assert_eq!(t.statistic, 0.0);
    assert_eq!(t.degrees_of_freedom, 3);
    assert!((t.p_value - 1.0).abs() < 1e-12);
    // Expected counts 1,1,1,97 pool into a single small cell merged forward.
    let t = chi_square_gof(&[1, 1, 1, 97], &[0.01, 0.01, 0.01, 0.97]).unwrap_err();
    assert!(t.to_string().contains("fewer than two cells"));
    let t = chi_square_gof(&[50, 30, 20], &[0.5, 0.3, 0.2]).unwrap();
    assert!(t.statistic.abs() < 1e-12 && t.degrees_of_freedom == 2);
    assert!(chi_square_gof(&[10, 20], &[0.5]).is_err());
}

fn edge_only() -> (ErgmSpec, f64) {
    let spec = ErgmSpec::edge_only(-0.4, 10).unwrap();
    let p = spec.rate_analysis(10_000, 1e-10).unwrap().phases[0].p_star;
    (spec, p)
}

#[test]
fn edge_only_clt_matches_binomial_variance() {
    let (spec, p) = edge_only();
    assert!((p - phasefkg::numeric::phi(-0.8)).abs() < 1e-8);
    let cfg = ErgmCltConfig {
        eta: 2.0,
        exact_mode_max_n: 0,
        subgraph: SmallGraph::wedge(),
        plan: ChainPlan { chains: 4, burn_in_sweeps: 20, pilot_sweeps: 200, samples: 2000 },
    };
    let r = clt_report_ergm(&spec, p, &cfg, &SeedStream::new(16, "edge-only")).unwrap();
    assert!((r.sigma_n_squared - p * (1.0 - p) * 45.0).abs() < 1e-9);
    assert!((r.edge.variance_ratio - 1.0).abs() < 0.15, "{}", r.edge.variance_ratio);
    assert!(r.chain.effective_samples >= MIN_EFFECTIVE_SAMPLES);
    assert!(r.correlation > 0.8, "{}", r.correlation);
    assert!(r.edge.approximate && r.chain.approximate);

    let again = clt_report_ergm(&spec, p, &cfg, &SeedStream::new(16, "edge-only")).unwrap();
    assert_eq!(again.edge.d_k, r.edge.d_k);
}

#[test]
fn thinned_chain_rejects_low_effective_sample_size() {
    let (spec, p) = edge_only();
    let cfg = ErgmCltConfig {
        eta: 2.0,
        exact_mode_max_n: 0,
        subgraph: SmallGraph::edge(),
        plan: ChainPlan { chains: 2, burn_in_sweeps: 5, pilot_sweeps: 100, samples: 120 },
    };
    let err = clt_report_ergm(&spec, p, &cfg, &SeedStream::new(17, "small")).unwrap_err();
    assert!(err.to_string().contains("effective sample size"), "{err}");
}

#[test]
fn autocorrelation_time_of_a_markov_chain() {
    // Two-state chain flipping with probability q has ρ_k = (1 − 2q)^k.
    let mut rng = SeedStream::new(18, "two-state").replica(0);
    let q = 0.1;
    let mut s = 0.0;
    let series: Vec<f64> = (0..200_000)
        .map(|_| {
            if rng.random::<f64>() < q {
                s = 1.0 - s;
            }
            s
        })
        .collect();
    let tau = integrated_autocorrelation_time(&series).unwrap();
    let r: f64 = 1.0 - 2.0 * q;
    let exact = 0.5 + r / (1.0 - r);
    assert!((tau - exact).abs() < 0.1 * exact, "{tau} vs {exact}");
    assert!(integrated_autocorrelation_time(&series[..5]).is_err());
}
