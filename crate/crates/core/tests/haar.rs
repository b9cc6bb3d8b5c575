use meshprune::stats::uniformity_ks;
use meshprune::unitary::{haar_random_unitary, unitarity_error};
use meshprune::{ComplexMatrix, RngSeed};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

#[test]
fn one_by_one_phases_are_uniform() {
    let phases: Vec<f64> = (0..10_000)
        .map(|k| {
            let u = haar_random_unitary(1, RngSeed::new(101, k)).unwrap();
            assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
            u[(0, 0)].arg().rem_euclid(TAU)
        })
        .collect();
    let d = uniformity_ks(&phases, TAU).unwrap();
    assert!(d < 0.02, "KS {d}");
}

#[test]
fn corner_weight_matches_haar_moment() {
    // |U_11|^2 ~ Beta(1, n - 1): mean 1/n, variance (n - 1) / (n^2 (n + 1))
    let n = 8;
    let draws = 10_000;
    let mean = (0..draws)
        .map(|k| haar_random_unitary(n, RngSeed::new(202, k)).unwrap()[(0, 0)].norm_sqr())
        .sum::<f64>()
        / draws as f64;
    let nf = n as f64;
    let se = ((nf - 1.0) / (nf * nf * (nf + 1.0)) / draws as f64).sqrt();
    assert!((mean - 1.0 / nf).abs() < 3.0 * se, "mean {mean}, se {se}");
}

fn eigenphases(u: &ComplexMatrix) -> Vec<f64> {
    let n = u.rows();
    let m = DMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    let schur = m.schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)].arg().rem_euclid(TAU)).collect()
}

#[test]
fn pooled_eigenphases_are_uniform() {
    let mut phases = Vec::new();
    for k in 0..200 {
        let u = haar_random_unitary(16, RngSeed::new(303, k)).unwrap();
        phases.extend(eigenphases(&u));
    }
    let d = uniformity_ks(&phases, TAU).unwrap();
    assert!(d < 0.03, "KS {d}");
}

#[test]
fn eigenphase_oracle_on_a_known_diagonal() {
    let d = [0.3, 1.7, 4.0];
    let u = ComplexMatrix::from_diagonal(&d.map(|p| Complex64::from_polar(1.0, p)));
    let mut got = eigenphases(&u);
    got.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(d) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn left_multiplication_by_a_fixed_unitary_preserves_statistics() {
    // V U is again Haar: the corner-weight mean is unchanged
    let n = 4;
    let v = haar_random_unitary(n, RngSeed::new(404, 999)).unwrap();
    let draws = 4000;
    let mean = (0..draws)
        .map(|k| {
            let u = haar_random_unitary(n, RngSeed::new(404, k)).unwrap();
            v.matmul(&u).unwrap()[(0, 0)].norm_sqr()
        })
        .sum::<f64>()
        / draws as f64;
    let nf = n as f64;
    let se = ((nf - 1.0) / (nf * nf * (nf + 1.0)) / draws as f64).sqrt();
    assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn every_size_is_unitary_and_reproducible() {
    for n in [1, 2, 3, 7, 33, 100] {
        let a = haar_random_unitary(n, RngSeed::new(5, n as u64)).unwrap();
        assert!(unitarity_error(&a).unwrap() <= 1e-12);
        assert_eq!(a, haar_random_unitary(n, RngSeed::new(5, n as u64)).unwrap());
    }
}
