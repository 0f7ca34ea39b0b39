use phasefkg::gcwm::*;
use phasefkg::glauber::ExactTable;
use phasefkg::lattice::SpinConfig;
use phasefkg::numeric::{log_sum_exp, phi, phi_prime};
use phasefkg::rate::StationaryKind;
use phasefkg::rng::SeedStream;
use proptest::prelude::*;
use rand::Rng;

fn params(beta: &[f64], n: usize) -> GcwmParams {
    GcwmParams::new(beta.to_vec(), n).unwrap()
}

#[test]
fn rate_function_basics() {
    let p = params(&[0.0, 0.0], 10);
    let (l, dl, _) = p.rate_function(0.5).unwrap();
    assert!((l - std::f64::consts::LN_2).abs() < 1e-15);
    assert!(dl.abs() < 1e-15);
    for b2 in [0.5, 1.0, 3.0] {
        let q = params(&[-b2 / 2.0, b2], 10);
        let (_, _, d2l) = q.rate_function(0.5).unwrap();
        assert!((d2l - (2.0 * b2 - 4.0)).abs() < 1e-12);
    }
    let q = params(&[0.3, 0.7, 1.1], 6);
    assert!((q.hamiltonian(&SpinConfig::ones(6)) - 2.1).abs() < 1e-12);
}

#[test]
fn maximizers_of_reference_models() {
    let a = params(&[0.0, 0.0], 10).find_maximizers(10_000, 1e-10).unwrap();
    assert_eq!(a.global_maximizers.len(), 1);
    assert!((a.global_maximizers[0] - 0.5).abs() < 1e-10);
    assert_eq!(a.strictly_concave_maximizers.len(), 1);

    let b = params(&[-3.0, 3.0], 10).find_maximizers(10_000, 1e-10).unwrap();
    assert_eq!(b.stationary_points.len(), 3);
    let mid = &b.stationary_points[1];
    assert!((mid.m - 0.5).abs() < 1e-10);
    assert_eq!(mid.kind, StationaryKind::LocalMin);
    assert!((mid.map_derivative - 6.0 * phi_prime(0.0)).abs() < 1e-9);
    assert_eq!(b.global_maximizers.len(), 2);
    assert_eq!(b.strictly_concave_maximizers.len(), 2);
    let m = b.global_maximizers[1];
    // Independent fixed-point iteration of m = φ(6m − 3) from m = 1.
    let mut it = 1.0;
    for _ in 0..200 {
        it = phi(6.0 * it - 3.0);
    }
    assert!((m - it).abs() < 1e-9);
    assert!((m - 0.929).abs() < 1e-3);
    assert!((b.global_maximizers[0] - (1.0 - m)).abs() < 1e-9);

    let c = params(&[-1.0, 1.0], 10).find_maximizers(10_000, 1e-10).unwrap();
    assert_eq!(c.global_maximizers.len(), 1);
    assert!((c.global_maximizers[0] - 0.5).abs() < 1e-10);
    assert!((c.stationary_points[0].map_derivative - 0.5).abs() < 1e-9);
}

#[test]
fn lemma_equivalence_examples() {
    let r = params(&[0.0, 0.0], 10).check_lemma_equiv(0.5, 1e-8).unwrap();
    assert!(r.concave_stationary && r.attracting_fixed_point);
    let r = params(&[-3.0, 3.0], 10).check_lemma_equiv(0.5, 1e-8).unwrap();
    assert!(!r.concave_stationary && !r.attracting_fixed_point);
}

#[test]
fn lemma_equivalence_random_sweep() {
    let mut rng = SeedStream::new(31, "lemma").replica(0);
    for _ in 0..100 {
        let k = rng.random_range(2..=4);
        let mut beta = vec![rng.random_range(-4.0..2.0)];
        beta.extend((1..k).map(|_| rng.random_range(0.0..5.0)));
        let p = params(&beta, 50);
        let a = p.find_maximizers(10_000, 1e-10).unwrap();
        for s in &a.stationary_points {
            let r = p.check_lemma_equiv(s.m, 1e-8).unwrap();
            assert!(r.agree, "beta={beta:?} m={}", s.m);
        }
    }
}

#[test]
fn ferromagnetic_validation() {
    assert_eq!(ferromagnetic_violation(&[0.0, -1.0]), Some(2));
    assert_eq!(ferromagnetic_violation(&[-5.0, 1.0, 0.0]), None);
    assert!(GcwmParams::new(vec![0.0, -1.0], 10).is_err());
}

/// Brute-force level law from a 2^N enumeration of exp(N·h(m(x))).
fn brute_levels(p: &GcwmParams) -> Vec<f64> {
    let n = p.n;
    let mut by_level = vec![Vec::new(); n + 1];
    for i in 0..1u64 << n {
        let x = SpinConfig::from_index(n, i);
        by_level[x.sum() as usize].push(n as f64 * p.h(x.magnetization()));
    }
    let lse: Vec<f64> = by_level.iter().map(|v| log_sum_exp(v)).collect();
    let z = log_sum_exp(&lse);
    lse.iter().map(|l| (l - z).exp()).collect()
}

#[test]
fn exact_law_matches_brute_force() {
    let mut rng = SeedStream::new(77, "exact-law").replica(0);
    for n in 1..=12 {
        for _ in 0..20 {
            let beta = vec![rng.random_range(-3.0..1.0), rng.random_range(0.0..4.0), rng.random_range(0.0..2.0)];
            let p = params(&beta, n);
            let law = exact_magnetization_law(&p, None).unwrap();
            let brute = brute_levels(&p);
            for k in 0..=n {
                assert!((law.prob(k) - brute[k]).abs() < 1e-12, "n={n} k={k}");
            }
            if n < 2 {
                continue;
            }
            // Pair moments against the same enumeration.
            let mom = exchangeable_moments(&law).unwrap();
            let table = ExactTable::from_log_weights(
                n,
                (0..1u64 << n).map(|i| n as f64 * p.h(SpinConfig::from_index(n, i).magnetization())).collect(),
            )
            .unwrap();
            assert!((mom.mean_x1 - table.expect(|i| (i & 1) as f64)).abs() < 1e-12);
            assert!((mom.mean_x1x2 - table.expect(|i| (i & 3 == 3) as u8 as f64)).abs() < 1e-12);
            assert!((mom.cov_x1x2 - table.covariance(|i| (i & 1) as f64, |i| (i >> 1 & 1) as f64)).abs() < 1e-12);
            let s = |i: u64| i.count_ones() as f64;
            assert!((mom.var_sum - table.covariance(s, s)).abs() < 1e-10);
        }
    }
}

#[test]
fn binomial_special_cases() {
    let law = exact_magnetization_law(&params(&[0.0], 20), None).unwrap();
    let mut c = 1.0f64;
    for k in 0..=20 {
        assert!((law.prob(k) - c / 2f64.powi(20)).abs() < 1e-15);
        c = c * (20 - k) as f64 / (k + 1) as f64;
    }
    let mom = exchangeable_moments(&law).unwrap();
    assert!(mom.cov_x1x2.abs() < 1e-15);
    let two = exchangeable_moments(&exact_magnetization_law(&params(&[0.0], 2), None).unwrap()).unwrap();
    assert!((two.mean_x1x2 - 0.25).abs() < 1e-15);
    assert!(two.cov_x1x2.abs() < 1e-15);
}

#[test]
fn out_of_band_mass_is_exponentially_small() {
    let p = params(&[-3.0, 3.0], 500);
    let a = p.find_maximizers(10_000, 1e-10).unwrap();
    let bands: Vec<PhaseBand> = a.global_maximizers.iter().map(|&m| PhaseBand::new(m, 0.1, 0.05).unwrap()).collect();
    let lm = out_of_band_log_mass(&p, &bands).unwrap();
    assert!(lm < -0.01 * 500.0, "{lm}");
    check_bands_disjoint(&bands).unwrap();
    let overlapping = [PhaseBand::new(0.4, 0.2, 0.1).unwrap(), PhaseBand::new(0.6, 0.2, 0.1).unwrap()];
    assert!(check_bands_disjoint(&overlapping).is_err());
}

#[test]
fn discrete_partials() {
    let lin = params(&[0.7], 10);
    let x = SpinConfig::from_index(10, 0b1100101001);
    let d = discrete_partial(&lin, &x, 3);
    assert!((d.exact - 0.07).abs() < 1e-15);
    assert!(discrete_partial2(&lin, &x, 2, 5).unwrap().exact.abs() < 1e-15);
    // k=2: ∂_i m² = (2m(x^{−i}) + 1/N)/N, gap 1/N².
    for i in 0..10 {
        let r = monomial_partial(2, &x, i);
        let c = (x.sum() - x.get(i) as u64) as f64 / 10.0;
        assert!((r.exact - (2.0 * c + 0.1) / 10.0).abs() < 1e-15);
        assert!((r.gap - 0.01).abs() < 1e-15);
    }
}

#[test]
fn second_partial_gap_is_cubic() {
    let mut rng = SeedStream::new(8, "partial").replica(0);
    for k in 2..=5 {
        let mut worst = 0.0f64;
        for n in [10usize, 100, 1000] {
            for _ in 0..50 {
                let p: f64 = rng.random();
                let mut x = SpinConfig::zeros(2, n);
                for i in 0..n {
                    if rng.random::<f64>() < p {
                        x.set(i, 1);
                    }
                }
                let r = monomial_partial2(k, &x, 0, 1).unwrap();
                worst = worst.max(r.gap.abs() * (n as f64).powi(3));
            }
        }
        // (k choose 3)·... bounded; a generous constant for k ≤ 5.
        assert!(worst <= (k * k * k) as f64, "k={k}: {worst}");
    }
}

#[test]
fn local_fkg_examples() {
    let mut rng = SeedStream::new(1, "local").replica(0);
    let lin = params(&[0.4], 8);
    // A band covering every level, so the ratio is the unconditioned one.
    let band = PhaseBand::new(0.5, 0.6, 0.5).unwrap();
    let r = local_fkg_witness(&lin, &band, ScanMode::Exhaustive, &mut rng).unwrap();
    assert!(r.min_log_ratio.abs() < 1e-12);

    let p = params(&[0.0, 2.0], 8);
    let a = p.find_maximizers(10_000, 1e-10).unwrap();
    let band = PhaseBand::new(a.global_maximizers[0], 0.3, 0.05).unwrap();
    let r = local_fkg_witness(&p, &band, ScanMode::Exhaustive, &mut rng).unwrap();
    assert!(r.min_log_ratio >= -1e-10, "{r:?}");
    assert_eq!(r.superadditivity_violations, 0);
    assert!(r.pairs_checked > 0);

    // (A+2B)^3 + A^3 ≥ 2(A+B)^3 at A=0.2, B=0.1.
    let (a3, b3) = (0.2f64, 0.1f64);
    assert!((a3 + 2.0 * b3).powi(3) + a3.powi(3) >= 2.0 * (a3 + b3).powi(3));
    assert!(((0.4f64).powi(3) + (0.2f64).powi(3) - 0.072).abs() < 1e-15);
}

#[test]
fn ldp_rate_approaches_its_limit() {
    // −(1/N) log P(out of band) = I + (½ log N + c)/N + o(1/N), so the
    // finite-N rate sits above I = L(m*) − L(m* − η) and falls towards it.
    let mut prev_rate = f64::INFINITY;
    let mut prev_mass = 0.0;
    for n in [100, 200, 400, 800] {
        let p = params(&[-3.0, 3.0], n);
        let a = p.find_maximizers(10_000, 1e-10).unwrap();
        let m = a.global_maximizers[1];
        let limit = p.rate_function(m).unwrap().0 - p.rate_function(m - 0.1).unwrap().0;
        let bands: Vec<PhaseBand> = a.global_maximizers.iter().map(|&m| PhaseBand::new(m, 0.1, 0.05).unwrap()).collect();
        let log_mass = out_of_band_log_mass(&p, &bands).unwrap();
        let rate = -log_mass / n as f64;
        assert!(rate >= 0.005 && rate > limit && rate < prev_rate, "N={n}: {rate} (limit {limit})");
        assert!(log_mass < prev_mass);
        prev_rate = rate;
        prev_mass = log_mass;
    }
}

#[test]
fn exact_sampler_matches_law() {
    let p = params(&[-3.0, 3.0], 40);
    let a = p.find_maximizers(10_000, 1e-10).unwrap();
    let band = PhaseBand::new(a.global_maximizers[1], 0.1, 0.05).unwrap();
    let law = exact_magnetization_law(&p, Some(&band)).unwrap();
    let mu = GcwmMeasure::new(p, Some(band));
    let mut rng = SeedStream::new(3, "exact-sampler").replica(0);
    let draws = 50_000;
    let mean = (0..draws).map(|_| mu.sample_exact(&law, &mut rng).sum() as f64).sum::<f64>() / draws as f64;
    let se = (law.variance_sum() / draws as f64).sqrt();
    assert!((mean - law.mean_sum()).abs() < 4.0 * se);
}

proptest! {
    #[test]
    fn mean_field_map_fixed_points_are_stationary(b1 in -4.0f64..1.0, b2 in 0.0f64..5.0) {
        let p = params(&[b1, b2], 20);
        let a = p.find_maximizers(2000, 1e-10).unwrap();
        for s in &a.stationary_points {
            prop_assert!(s.fixed_point_residual.abs() < 1e-8);
        }
    }

    #[test]
    fn level_law_sums_to_one(b1 in -3.0f64..1.0, b2 in 0.0f64..4.0, n in 1usize..300) {
        let law = exact_magnetization_law(&params(&[b1, b2], n), None).unwrap();
        let total: f64 = law.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
