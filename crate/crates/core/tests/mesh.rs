use meshprune::mesh::{block_count, block_matrix, decompose, mesh_columns, reconstruct};
use meshprune::unitary::{haar_random_unitary, unitarity_error};
use meshprune::{MeshPlan, RngSeed};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};

fn plan(n: usize, seed: u64) -> (meshprune::ComplexMatrix, MeshPlan) {
    let u = haar_random_unitary(n, RngSeed::new(seed, n as u64)).unwrap();
    let p = decompose(&u).unwrap();
    (u, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_within_size_scaled_tolerance(n in 2usize..=64, seed in any::<u64>()) {
        let (u, p) = plan(n, seed);
        let err = reconstruct(&p).unwrap().sub(&u).unwrap().frobenius_norm();
        prop_assert!(err <= 1e-9 * n as f64, "n={} err={}", n, err);
    }

    #[test]
    fn angles_and_counts_are_canonical(n in 1usize..=24, seed in any::<u64>()) {
        let (_, p) = plan(n, seed);
        prop_assert_eq!(p.blocks.len(), block_count(n).unwrap());
        prop_assert_eq!(p.diag.len(), n);
        for b in &p.blocks {
            prop_assert!((0.0..=FRAC_PI_2).contains(&b.theta));
            prop_assert!((0.0..TAU).contains(&b.phi));
        }
        for d in &p.diag {
            prop_assert!((d.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn blocks_are_special_unitary(theta in -10.0f64..10.0, phi in -10.0f64..10.0) {
        let b = block_matrix(theta, phi);
        prop_assert!(unitarity_error(&b).unwrap() <= 1e-12);
        let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
        prop_assert!((det - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }
}

#[test]
fn sixteen_channel_round_trip() {
    let (u, p) = plan(16, 77);
    assert!(reconstruct(&p).unwrap().sub(&u).unwrap().frobenius_norm() <= 1e-9);
}

#[test]
fn zeroed_rotations_still_give_a_unitary() {
    let (_, mut p) = plan(12, 3);
    for b in &mut p.blocks {
        b.theta = 0.0;
    }
    assert!(unitarity_error(&reconstruct(&p).unwrap()).unwrap() <= 1e-10 * 12.0);
}

#[test]
fn plan_json_round_trip_preserves_reconstruction() {
    let (_, p) = plan(9, 8);
    let back = MeshPlan::from_json(&p.to_json()).unwrap();
    assert_eq!(back, p);
    assert_eq!(reconstruct(&back).unwrap(), reconstruct(&p).unwrap());
}

#[test]
fn physical_columns_fill_a_rectangle() {
    for n in [2, 3, 6, 7, 16] {
        let (_, p) = plan(n, 1);
        let cols = mesh_columns(&p);
        let mut per_column = vec![0usize; n];
        for &c in &cols {
            per_column[c] += 1;
        }
        // n columns alternating floor(n/2) and floor((n-1)/2) blocks
        for (c, &k) in per_column.iter().enumerate() {
            let want = if c % 2 == 0 { n / 2 } else { (n - 1) / 2 };
            assert_eq!(k, want, "n={n} column {c}");
        }
    }
}
