use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use super::block::Su2;
use crate::error::{Error, Result};
use crate::fmt::f64_17;
use crate::unitary::ComplexMatrix;

/// One programmable block `T_m^l(theta, phi)`; `m` and `l` are one-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block {
    /// Upper channel of the pair `(m, m + 1)`.
    pub m: usize,
    /// Index of the nulled row or column that fixed this block.
    pub l: usize,
    pub theta: f64,
    pub phi: f64,
}

/// A decomposed circuit `U = D * T_K ... T_2 T_1`.
///
/// `blocks` is in application order: `blocks[0]` is the rightmost factor
/// and acts on the input first.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshPlan {
    pub n: usize,
    pub blocks: Vec<Block>,
    pub diag: Vec<Complex64>,
}

/// `n (n - 1) / 2`, or `None` on overflow.
pub fn block_count(n: usize) -> Option<usize> {
    n.checked_mul(n.checked_sub(1)?).map(|p| p / 2)
}

impl MeshPlan {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::invalid("plan dimension must be positive"));
        }
        let expected = block_count(n).ok_or_else(|| Error::invalid("plan dimension too large"))?;
        if self.blocks.len() != expected {
            return Err(Error::invalid(format!(
                "plan for n={n} needs {expected} blocks, has {}",
                self.blocks.len()
            )));
        }
        if self.diag.len() != n {
            return Err(Error::invalid(format!(
                "plan for n={n} needs {n} diagonal phases, has {}",
                self.diag.len()
            )));
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if b.m == 0 || b.m >= n || b.l == 0 || b.l > n {
                return Err(Error::invalid(format!(
                    "block {k} has out-of-range indices (m={}, l={})",
                    b.m, b.l
                )));
            }
            if !b.theta.is_finite() || !b.phi.is_finite() {
                return Err(Error::invalid(format!("block {k} has non-finite angles")));
            }
        }
        for (i, d) in self.diag.iter().enumerate() {
            if !d.re.is_finite() || !d.im.is_finite() || (d.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("diagonal phase {i} is not unit-modulus")));
            }
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.theta).collect()
    }

    pub fn phis(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.phi).collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{{\"n\":{},\"blocks\":[", self.n);
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "{{\"m\":{},\"l\":{},\"theta\":{},\"phi\":{}}}",
                b.m,
                b.l,
                f64_17(b.theta),
                f64_17(b.phi)
            );
        }
        out.push_str("],\"diag\":[");
        for (k, d) in self.diag.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{{\"re\":{},\"im\":{}}}", f64_17(d.re), f64_17(d.im));
        }
        out.push_str("]}");
        out
    }

    /// Parses and validates a plan.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct BlockRepr {
            m: usize,
            l: usize,
            theta: f64,
            phi: f64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct PhaseRepr {
            re: f64,
            im: f64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            n: usize,
            blocks: Vec<BlockRepr>,
            diag: Vec<PhaseRepr>,
        }
        let repr: Repr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let plan = MeshPlan {
            n: repr.n,
            blocks: repr
                .blocks
                .into_iter()
                .map(|b| Block {
                    m: b.m,
                    l: b.l,
                    theta: b.theta,
                    phi: b.phi,
                })
                .collect(),
            diag: repr.diag.into_iter().map(|d| Complex64::new(d.re, d.im)).collect(),
        };
        plan.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(plan)
    }
}

/// Evaluates `D * prod T` in the plan's stored order.
pub fn reconstruct(plan: &MeshPlan) -> Result<ComplexMatrix> {
    plan.validate()?;
    let mut out = ComplexMatrix::identity(plan.n);
    for b in &plan.blocks {
        Su2::block(b.theta, b.phi).apply_left(&mut out, b.m - 1);
    }
    for (i, d) in plan.diag.iter().enumerate() {
        let cols = out.cols();
        for j in 0..cols {
            out[(i, j)] *= d;
        }
    }
    Ok(out)
}

/// Physical column of every block in the rectangular layout.
///
/// Blocks are packed greedily in application order: a block sits one column
/// after the latest block on either of its channels.
pub fn mesh_columns(plan: &MeshPlan) -> Vec<usize> {
    let mut depth = vec![0usize; plan.n];
    plan.blocks
        .iter()
        .map(|b| {
            let col = depth[b.m - 1].max(depth[b.m]);
            depth[b.m - 1] = col + 1;
            depth[b.m] = col + 1;
            col
        })
        .collect()
}
