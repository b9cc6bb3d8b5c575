//! SU(2) block algebra.
//!
//! A block is `T(theta, phi) = Rx(-pi/2) Rz(-2 theta) Rx(-pi/2) Rz(-phi)` with
//! `Rz(z) = diag(e^{-iz/2}, e^{iz/2})` and
//! `Rx(z) = [[cos(z/2), -i sin(z/2)], [-i sin(z/2), cos(z/2)]]`. Multiplied out,
//!
//! ```text
//! T = i [[ sin(theta) e^{ i phi/2},  cos(theta) e^{-i phi/2}],
//!        [ cos(theta) e^{ i phi/2}, -sin(theta) e^{-i phi/2}]]
//! ```
//!
//! so `theta = 0` is the full cross (swap) state and `theta = pi/2` the bar
//! state. Channel indices `m` are one-based: a block at `m` mixes channels
//! `m` and `m + 1`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use super::Block;
use crate::error::{Error, Result};
use crate::unitary::ComplexMatrix;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2x2 complex matrix `[a, b, c, d]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2(pub [Complex64; 4]);

impl Su2 {
    /// Closed form of the block product.
    pub fn block(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let ep = Complex64::from_polar(1.0, phi / 2.0);
        let em = ep.conj();
        Su2([I * s * ep, I * c * em, I * c * ep, -I * s * em])
    }

    pub fn rz(zeta: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Su2([
            Complex64::from_polar(1.0, -zeta / 2.0),
            z,
            z,
            Complex64::from_polar(1.0, zeta / 2.0),
        ])
    }

    pub fn rx(zeta: f64) -> Self {
        let (s, c) = (zeta / 2.0).sin_cos();
        let c = Complex64::new(c, 0.0);
        Su2([c, -I * s, -I * s, c])
    }

    pub fn mul(&self, rhs: &Su2) -> Su2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Su2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn adjoint(&self) -> Su2 {
        let [a, b, c, d] = self.0;
        Su2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn det(&self) -> Complex64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, 2, self.0.to_vec()).expect("2x2")
    }

    /// Left-multiplies rows `top` and `top + 1` of `target` by this block.
    pub fn apply_left(&self, target: &mut ComplexMatrix, top: usize) {
        let [a, b, c, d] = self.0;
        let (r0, r1) = target.two_rows_mut(top, top + 1);
        for (x, y) in r0.iter_mut().zip(r1.iter_mut()) {
            let (u, v) = (*x, *y);
            *x = a * u + b * v;
            *y = c * u + d * v;
        }
    }

    /// Right-multiplies columns `left` and `left + 1` of `target` by this block.
    pub fn apply_right(&self, target: &mut ComplexMatrix, left: usize) {
        let [a, b, c, d] = self.0;
        for i in 0..target.rows() {
            let u = target[(i, left)];
            let v = target[(i, left + 1)];
            target[(i, left)] = u * a + v * c;
            target[(i, left + 1)] = u * b + v * d;
        }
    }
}

/// The 2x2 block matrix, formed as the literal product of its four rotations.
pub fn block_matrix(theta: f64, phi: f64) -> ComplexMatrix {
    let half_pi = -FRAC_PI_2;
    Su2::rx(half_pi)
        .mul(&Su2::rz(-2.0 * theta))
        .mul(&Su2::rx(half_pi))
        .mul(&Su2::rz(-phi))
        .to_matrix()
}

/// `n x n` identity with the 2x2 block `b` placed on channels `m, m + 1`.
pub fn embed_block(n: usize, m: usize, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m == 0 || m >= n {
        return Err(Error::invalid(format!(
            "channel index m={m} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    if b.rows() != 2 || b.cols() != 2 {
        return Err(Error::invalid("embedded block must be 2x2"));
    }
    let mut out = ComplexMatrix::identity(n);
    for i in 0..2 {
        for j in 0..2 {
            out[(m - 1 + i, m - 1 + j)] = b[(i, j)];
        }
    }
    Ok(out)
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn arg_or_zero(z: Complex64) -> f64 {
    if z == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        z.arg()
    }
}

fn check_indices(u: &ComplexMatrix, m: usize, l: usize) -> Result<()> {
    let n = u.rows();
    if !u.is_square() || m == 0 || m >= n || l == 0 || l > n {
        return Err(Error::invalid(format!(
            "indices (m={m}, l={l}) invalid for {n}x{} matrix",
            u.cols()
        )));
    }
    Ok(())
}

/// Angles that null entry `(l, m)` (one-based) of `U T^dagger`.
///
/// With `a = U[l, m]`, `b = U[l, m+1]` the condition is
/// `a sin(theta) = -b cos(theta) e^{i phi}`.
pub fn solve_nulling_right(u: &ComplexMatrix, m: usize, l: usize) -> Result<(f64, f64)> {
    check_indices(u, m, l)?;
    let a = u[(l - 1, m - 1)];
    let b = u[(l - 1, m)];
    if b.norm() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let theta = b.norm().atan2(a.norm());
    let phi = if a.norm() == 0.0 {
        0.0
    } else {
        wrap_phase(arg_or_zero(-a) - arg_or_zero(b))
    };
    Ok((theta, phi))
}

/// Angles that null entry `(m + 1, l)` (one-based) of `T U`.
///
/// With `a = U[m, l]`, `b = U[m+1, l]` the condition is
/// `a cos(theta) e^{i phi} = b sin(theta)`.
pub fn solve_nulling_left(u: &ComplexMatrix, m: usize, l: usize) -> Result<(f64, f64)> {
    check_indices(u, m, l)?;
    let a = u[(m - 1, l - 1)];
    let b = u[(m, l - 1)];
    if a.norm() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let theta = a.norm().atan2(b.norm());
    let phi = if b.norm() == 0.0 {
        0.0
    } else {
        wrap_phase(arg_or_zero(b) - arg_or_zero(a))
    };
    Ok((theta, phi))
}

/// Moves a left-side inverse block through a diagonal:
/// `T(blk)^dagger D = D' T(blk')` with `blk'.theta == blk.theta`.
///
/// Only the diagonal entries on the block's two channels change, together
/// with `phi`.
pub fn commute_through_diagonal(diag: &[Complex64], blk: &Block) -> Result<(Vec<Complex64>, Block)> {
    let m = blk.m;
    if m == 0 || m >= diag.len() {
        return Err(Error::invalid(format!(
            "channel index m={m} outside 1..={}",
            diag.len().saturating_sub(1)
        )));
    }
    let (d1, d2) = (diag[m - 1], diag[m]);
    let new_phi = wrap_phase(arg_or_zero(d1) - arg_or_zero(d2));
    let half = Complex64::from_polar(1.0, -new_phi / 2.0);
    let mut out = diag.to_vec();
    out[m - 1] = -Complex64::from_polar(1.0, -blk.phi / 2.0) * d1 * half;
    out[m] = -Complex64::from_polar(1.0, blk.phi / 2.0) * d1 * half;
    Ok((out, Block { phi: new_phi, ..*blk }))
}
