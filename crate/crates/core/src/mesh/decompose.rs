use std::f64::consts::FRAC_PI_2;

use super::block::{commute_through_diagonal, solve_nulling_left, solve_nulling_right, Su2};
use super::plan::{Block, MeshPlan};
use crate::error::{Error, Result};
use crate::unitary::{unitarity_error, ComplexMatrix};

/// Which side a nulling block multiplies the working matrix from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullSide {
    /// `U <- U T^dagger`, nulls entry `(l, m)`.
    Right,
    /// `U <- T U`, nulls entry `(m + 1, l)`.
    Left,
}

/// One step of the nulling schedule (one-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NullStep {
    pub side: NullSide,
    pub m: usize,
    pub l: usize,
}

impl NullStep {
    /// The (row, column) entry this step zeroes, one-based.
    pub fn target(&self) -> (usize, usize) {
        match self.side {
            NullSide::Right => (self.l, self.m),
            NullSide::Left => (self.m + 1, self.l),
        }
    }
}

/// Nulling order for an `n x n` unitary: the lower triangle is cleared one
/// anti-diagonal at a time, odd anti-diagonals from the right and even ones
/// from the left.
pub fn nulling_schedule(n: usize) -> Vec<NullStep> {
    let mut steps = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..n {
        if i % 2 == 1 {
            for j in 0..i {
                steps.push(NullStep {
                    side: NullSide::Right,
                    m: i - j,
                    l: n - j,
                });
            }
        } else {
            for j in 1..=i {
                steps.push(NullStep {
                    side: NullSide::Left,
                    m: n + j - i - 1,
                    l: j,
                });
            }
        }
    }
    steps
}

/// Factorizes a unitary into a [`MeshPlan`] so that `reconstruct(plan) == u`.
pub fn decompose(u: &ComplexMatrix) -> Result<MeshPlan> {
    decompose_observed(u, |_, _| {})
}

/// Decomposition with a hook called after every nulling step with the
/// working matrix and the schedule prefix completed so far.
pub(crate) fn decompose_observed(
    u: &ComplexMatrix,
    mut on_step: impl FnMut(&ComplexMatrix, &[NullStep]),
) -> Result<MeshPlan> {
    let err = unitarity_error(u)?;
    if err > 1e-9 {
        return Err(Error::Precondition(format!("input is not unitary (error {err:.3e})")));
    }
    let n = u.rows();
    let schedule = nulling_schedule(n);
    let mut work = u.clone();
    let mut right = Vec::new();
    let mut left = Vec::new();
    for (k, step) in schedule.iter().enumerate() {
        match step.side {
            NullSide::Right => {
                let (theta, phi) = solve_nulling_right(&work, step.m, step.l)?;
                Su2::block(theta, phi).adjoint().apply_right(&mut work, step.m - 1);
                right.push(Block {
                    m: step.m,
                    l: step.l,
                    theta,
                    phi,
                });
            }
            NullSide::Left => {
                let (theta, phi) = solve_nulling_left(&work, step.m, step.l)?;
                Su2::block(theta, phi).apply_left(&mut work, step.m - 1);
                left.push(Block {
                    m: step.m,
                    l: step.l,
                    theta,
                    phi,
                });
            }
        }
        let (r, c) = step.target();
        work[(r - 1, c - 1)] = num_complex::Complex64::new(0.0, 0.0);
        on_step(&work, &schedule[..=k]);
    }
    // work = L_k..L_1 U R_1^dagger..R_r^dagger = D, so
    // U = L_1^dagger..L_k^dagger D R_r..R_1; push each L^dagger through D.
    let mut diag = work.diagonal();
    let mut moved = Vec::with_capacity(left.len());
    for blk in left.iter().rev() {
        let (d, b) = commute_through_diagonal(&diag, blk)?;
        debug_assert!(b.theta >= 0.0 && b.theta <= FRAC_PI_2);
        diag = d;
        moved.push(b);
    }
    // Application order: R_1 .. R_r, then T'_k .. T'_1.
    let mut blocks = right;
    blocks.extend(moved);
    Ok(MeshPlan { n, blocks, diag })
}
