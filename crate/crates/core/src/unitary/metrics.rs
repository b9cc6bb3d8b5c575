use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Frobenius norm of `U^dagger U - I`.
pub fn unitarity_error(u: &ComplexMatrix) -> Result<f64> {
    if !u.is_square() {
        return Err(Error::invalid(format!(
            "unitarity check needs a square matrix, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let n = u.rows();
    let mut acc = 0.0;
    // (U^dagger U)_{ij} = sum_k conj(U_ki) U_kj
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += u[(k, i)].conj() * u[(k, j)];
            }
            if i == j {
                s -= 1.0;
            }
            acc += s.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

fn check_pair(defective: &ComplexMatrix, original: &ComplexMatrix) -> Result<()> {
    if !original.is_square() {
        return Err(Error::invalid("operators must be square"));
    }
    defective.check_same_shape(original)
}

/// Trace fidelity between a defective operator and the unitary it should
/// implement: `2 Re Tr[D^dagger O] / (N + Tr[D^dagger D])`, where `N` is the
/// matrix dimension. Equals 1 exactly when `D == O` and never exceeds 1.
pub fn fidelity(defective: &ComplexMatrix, original: &ComplexMatrix) -> Result<f64> {
    check_pair(defective, original)?;
    let n = original.rows() as f64;
    let overlap = defective.adjoint_trace_product(original)?;
    let self_overlap = defective.adjoint_trace_product(defective)?.re;
    Ok(2.0 * overlap.re / (n + self_overlap))
}

/// Mean squared entry-wise distance `(1/N^2) sum |O_ij - D_ij|^2`.
pub fn cost_j(defective: &ComplexMatrix, original: &ComplexMatrix) -> Result<f64> {
    check_pair(defective, original)?;
    let n = original.rows() as f64;
    let sq: f64 = original
        .as_slice()
        .iter()
        .zip(defective.as_slice())
        .map(|(o, d)| (o - d).norm_sqr())
        .sum();
    Ok(sq / (n * n))
}

/// The same cost expanded through traces, assuming `O` unitary:
/// `1/N + (Tr[D^dagger D] - 2 Re Tr[D^dagger O]) / N^2`.
pub fn cost_j_trace_form(defective: &ComplexMatrix, original: &ComplexMatrix) -> Result<f64> {
    check_pair(defective, original)?;
    let n = original.rows() as f64;
    let dd = defective.adjoint_trace_product(defective)?.re;
    let d_o = defective.adjoint_trace_product(original)?.re;
    Ok(1.0 / n + (dd - 2.0 * d_o) / (n * n))
}
