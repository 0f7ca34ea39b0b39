use phasefkg::lattice::*;
use proptest::prelude::*;

fn cfg(v: &[u8]) -> SpinConfig {
    SpinConfig::from_values(2, v).unwrap()
}

fn binary(n: usize) -> impl Strategy<Value = SpinConfig> {
    proptest::collection::vec(0u8..2, n).prop_map(|v| SpinConfig::from_values(2, &v).unwrap())
}

fn pair(max_n: usize) -> impl Strategy<Value = (SpinConfig, SpinConfig)> {
    (1..=max_n).prop_flat_map(|n| (binary(n), binary(n)))
}

fn triple(max_n: usize) -> impl Strategy<Value = (SpinConfig, SpinConfig, SpinConfig)> {
    (1..=max_n).prop_flat_map(|n| (binary(n), binary(n), binary(n)))
}

#[test]
fn meet_join_examples() {
    let x = cfg(&[1, 0, 1]);
    let y = cfg(&[0, 1, 1]);
    assert_eq!(meet(&x, &y).unwrap(), cfg(&[0, 0, 1]));
    assert_eq!(join(&x, &y).unwrap(), cfg(&[1, 1, 1]));
    assert_eq!(meet(&x, &x).unwrap(), x);
    assert_eq!(hamming(&x, &y).unwrap(), 2);
    assert_eq!(hamming(&x, &x).unwrap(), 0);
    assert_eq!(hamming(&x, &cfg(&[0, 1, 0])).unwrap(), 3);
}

#[test]
fn lattice_laws_exhaustive_small() {
    for n in 1..=4 {
        let all: Vec<SpinConfig> = (0..1u64 << n).map(|i| SpinConfig::from_index(n, i)).collect();
        for x in &all {
            for y in &all {
                let m = meet(x, y).unwrap();
                let j = join(x, y).unwrap();
                assert_eq!(m, meet(y, x).unwrap());
                assert_eq!(j, join(y, x).unwrap());
                assert_eq!(meet(x, &j).unwrap(), *x);
                assert_eq!(join(x, &m).unwrap(), *x);
                for z in &all {
                    assert_eq!(meet(&m, z).unwrap(), meet(x, &meet(y, z).unwrap()).unwrap());
                    assert_eq!(join(&j, z).unwrap(), join(x, &join(y, z).unwrap()).unwrap());
                }
            }
        }
    }
}

/// Independent count of up-sets of {0,1}^n by filtering all 2^(2^n) subsets.
fn brute_upset_count(n: usize) -> usize {
    let size = 1usize << n;
    (0u64..1u64 << size)
        .filter(|&mask| {
            (0..size).all(|x| mask >> x & 1 == 0 || (0..n).all(|i| mask >> (x | 1 << i) & 1 == 1))
        })
        .count()
}

#[test]
fn upset_counts_match_brute_force() {
    for (n, expected) in [(1, 3), (2, 6), (3, 20)] {
        assert_eq!(brute_upset_count(n), expected);
        let ups = enumerate_upsets(n).unwrap();
        assert_eq!(ups.len(), expected);
        assert!(ups.iter().all(|u| u.is_upward_closed()));
    }
    // Dedekind numbers continue 168, 7581.
    assert_eq!(enumerate_upsets(4).unwrap().len(), 168);
    assert_eq!(enumerate_upsets(5).unwrap().len(), 7581);
    assert!(enumerate_upsets(6).is_err());
}

#[test]
fn intrinsic_distance_cases() {
    let full = Region::full(2, 4).enumerate_binary(4).unwrap();
    let a = cfg(&[0, 0, 0, 0]);
    let b = cfg(&[1, 1, 0, 1]);
    assert_eq!(intrinsic_distance(&full, &a, &a).unwrap(), Distance::Finite(0));
    assert_eq!(intrinsic_distance(&full, &a, &b).unwrap(), Distance::Finite(3));
    assert_eq!(intrinsic_diameter(&full).unwrap(), Distance::Finite(4));
    let two = Region::from_points("pair", vec![cfg(&[0, 0, 0]), cfg(&[1, 1, 0])]);
    assert_eq!(intrinsic_distance(&two, &cfg(&[0, 0, 0]), &cfg(&[1, 1, 0])).unwrap(), Distance::Infinite);
    assert_eq!(intrinsic_diameter(&two).unwrap(), Distance::Infinite);
}

#[test]
fn intrinsic_distance_dominates_hamming_on_a_band() {
    // Configurations with 1 or 2 ones out of 5: connected, distances can
    // exceed Hamming (e.g. between two weight-1 points through weight 2).
    let band = Region::from_predicate("w in 1..=2", |x| (1..=2).contains(&x.sum())).enumerate_binary(5).unwrap();
    let pts = band.enumeration().unwrap().to_vec();
    for a in &pts {
        for b in &pts {
            let d = intrinsic_distance(&band, a, b).unwrap();
            let h = hamming(a, b).unwrap();
            match d {
                Distance::Finite(d) => assert!(d >= h),
                Distance::Infinite => panic!("band is connected"),
            }
        }
    }
}

proptest! {
    #[test]
    fn magnetization_inclusion_exclusion((x, y) in pair(70)) {
        let s = meet(&x, &y).unwrap().sum() + join(&x, &y).unwrap().sum();
        prop_assert_eq!(s, x.sum() + y.sum());
    }

    #[test]
    fn hamming_splits_through_meet((x, y) in pair(70)) {
        let m = meet(&x, &y).unwrap();
        prop_assert_eq!(hamming(&m, &x).unwrap() + hamming(&m, &y).unwrap(), hamming(&x, &y).unwrap());
    }

    #[test]
    fn lattice_laws_random((x, y, z) in triple(130)) {
        prop_assert_eq!(meet(&x, &y).unwrap(), meet(&y, &x).unwrap());
        prop_assert_eq!(join(&meet(&x, &y).unwrap(), &z).unwrap().leq(&join(&x, &z).unwrap()), true);
        prop_assert_eq!(meet(&x, &join(&x, &y).unwrap()).unwrap(), x.clone());
        prop_assert_eq!(
            join(&join(&x, &y).unwrap(), &z).unwrap(),
            join(&x, &join(&y, &z).unwrap()).unwrap()
        );
        prop_assert!(meet(&x, &y).unwrap().leq(&x));
        prop_assert!(x.leq(&join(&x, &y).unwrap()));
    }

    #[test]
    fn index_round_trip(n in 1usize..=20, idx in any::<u64>()) {
        let idx = idx & ((1u64 << n) - 1);
        prop_assert_eq!(SpinConfig::from_index(n, idx).to_index(), Some(idx));
    }

    #[test]
    fn full_cube_intrinsic_equals_hamming((a, b) in pair(6)) {
        let n = a.dimension();
        let full = Region::full(2, n).enumerate_binary(n).unwrap();
        prop_assert_eq!(intrinsic_distance(&full, &a, &b).unwrap(), Distance::Finite(hamming(&a, &b).unwrap()));
    }
}
