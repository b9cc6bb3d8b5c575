use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, RngSeed};
use crate::error::{Error, Result};

/// Draws an `n x n` unitary from the Haar measure on U(n).
///
/// A Ginibre matrix (i.i.d. standard complex Gaussians) is QR-factorized with
/// Householder reflections and the columns of `Q` are multiplied by the
/// phases of `diag(R)`, which makes the factorization unique and the
/// resulting distribution invariant.
pub fn haar_random_unitary(n: usize, seed: RngSeed) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::invalid("unitary dimension must be at least 1"));
    }
    let mut rng = seed.rng();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let (q, r_diag) = householder_qr(&mut a);
    let phases: Vec<Complex64> = r_diag
        .iter()
        .map(|r| {
            let norm = r.norm();
            if norm > 0.0 {
                r / norm
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j]))
}

/// Returns `(Q, diag(R))` for `A = QR`; `a` is overwritten with `R`.
fn householder_qr(a: &mut ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.rows();
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        let norm = (k..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[(k, k)];
        if norm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A <- (I - 2 v v^H) A on the trailing block.
        for j in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(k + t, j)] -= vi * dot * 2.0;
            }
        }
        reflectors.push(v);
    }
    // Q = H_0 H_1 ... H_{n-1} applied to the identity, right to left.
    let mut q = ComplexMatrix::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * q[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(k + t, j)] -= vi * dot * 2.0;
            }
        }
    }
    let diag = a.diagonal();
    (q, diag)
}
