use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mesh::{block_count, MeshPlan};
use crate::unitary::RngSeed;

/// Block indices ranked by ascending `theta`. Ranks are zero-based here;
/// rank `r` refers to `plan.blocks[order[r]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedThetaSet {
    order: Vec<usize>,
}

impl SortedThetaSet {
    /// Wraps an explicit permutation of `0..len`.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid("order is not a permutation"));
            }
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The permutation with one-based block positions.
    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Stable ascending sort of the plan's `theta` values; equal values keep
/// their block order.
pub fn sorted_theta_set(plan: &MeshPlan) -> SortedThetaSet {
    let mut order: Vec<usize> = (0..plan.blocks.len()).collect();
    order.sort_by(|&a, &b| plan.blocks[a].theta.total_cmp(&plan.blocks[b].theta));
    SortedThetaSet { order }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefectMode {
    PruneBody,
    PruneTail,
    NoiseBody,
    NoiseTail,
}

impl DefectMode {
    pub const ALL: [DefectMode; 4] = [
        DefectMode::PruneBody,
        DefectMode::PruneTail,
        DefectMode::NoiseBody,
        DefectMode::NoiseTail,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DefectMode::PruneBody => "prune_body",
            DefectMode::PruneTail => "prune_tail",
            DefectMode::NoiseBody => "noise_body",
            DefectMode::NoiseTail => "noise_tail",
        }
    }

    pub fn is_noise(&self) -> bool {
        matches!(self, DefectMode::NoiseBody | DefectMode::NoiseTail)
    }

    /// True for modes acting on the smallest rotations.
    pub fn is_body(&self) -> bool {
        matches!(self, DefectMode::PruneBody | DefectMode::NoiseBody)
    }
}

impl fmt::Display for DefectMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DefectMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DefectMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown defect mode '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefectConfig {
    pub mode: DefectMode,
    /// Number of affected blocks.
    pub sigma: usize,
    /// Noise amplitude in radians; unused by the prune modes.
    pub delta0: f64,
    /// Source of the per-block noise draws.
    pub seed: RngSeed,
}

/// Applies `cfg` using the plan's own sorted order.
pub fn apply_defect(plan: &MeshPlan, cfg: &DefectConfig) -> Result<MeshPlan> {
    apply_defect_with_order(plan, &sorted_theta_set(plan), cfg)
}

/// Applies `cfg` with ranks taken from `order`, which need not be the
/// plan's own sort.
///
/// Prune modes zero `theta` on the selected ranks. Noise modes add
/// `delta0 * u_k` with `u_k ~ U[0, 1)` drawn once per block in block order,
/// so the same seed gives each block the same draw for every `sigma`.
pub fn apply_defect_with_order(plan: &MeshPlan, order: &SortedThetaSet, cfg: &DefectConfig) -> Result<MeshPlan> {
    let total = block_count(plan.n).ok_or_else(|| Error::invalid("mesh size overflows"))?;
    if plan.blocks.len() != total || order.len() != total {
        return Err(Error::invalid(format!(
            "expected {total} blocks and ranks, got {} and {}",
            plan.blocks.len(),
            order.len()
        )));
    }
    if cfg.sigma > total {
        return Err(Error::invalid(format!(
            "sigma {} exceeds block count {total}",
            cfg.sigma
        )));
    }
    if cfg.mode.is_noise() && !(cfg.delta0 >= 0.0 && cfg.delta0.is_finite()) {
        return Err(Error::invalid(format!(
            "delta0 must be finite and non-negative, got {}",
            cfg.delta0
        )));
    }
    let ranks = if cfg.mode.is_body() {
        &order.order()[..cfg.sigma]
    } else {
        &order.order()[total - cfg.sigma..]
    };
    let mut out = plan.clone();
    if cfg.mode.is_noise() {
        let mut rng = cfg.seed.rng();
        let draws: Vec<f64> = (0..total).map(|_| rng.random::<f64>()).collect();
        for &k in ranks {
            out.blocks[k].theta += cfg.delta0 * draws[k];
        }
    } else {
        for &k in ranks {
            out.blocks[k].theta = 0.0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{decompose, Block};
    use crate::unitary::haar_random_unitary;
    use num_complex::Complex64;

    fn plan_with(thetas: &[f64]) -> MeshPlan {
        // three blocks is the n = 3 mesh
        let blocks = thetas
            .iter()
            .enumerate()
            .map(|(i, &theta)| Block {
                m: 1 + i % 2,
                l: i + 1,
                theta,
                phi: 0.1 * i as f64,
            })
            .collect();
        MeshPlan {
            n: 3,
            blocks,
            diag: vec![Complex64::new(1.0, 0.0); 3],
        }
    }

    fn cfg(mode: DefectMode, sigma: usize, delta0: f64) -> DefectConfig {
        DefectConfig {
            mode,
            sigma,
            delta0,
            seed: RngSeed::new(5, 0),
        }
    }

    #[test]
    fn sort_examples() {
        assert_eq!(
            sorted_theta_set(&plan_with(&[0.3, 0.1, 0.2])).one_based(),
            vec![2, 3, 1]
        );
        assert_eq!(sorted_theta_set(&plan_with(&[0.2, 0.2, 0.2])).order(), &[0, 1, 2]);
    }

    #[test]
    fn prune_selects_body_or_tail() {
        let p = plan_with(&[0.3, 0.1, 0.2]);
        let body = apply_defect(&p, &cfg(DefectMode::PruneBody, 2, 0.0)).unwrap();
        assert_eq!(body.thetas(), vec![0.3, 0.0, 0.0]);
        let tail = apply_defect(&p, &cfg(DefectMode::PruneTail, 1, 0.0)).unwrap();
        assert_eq!(tail.thetas(), vec![0.0, 0.1, 0.2]);
        assert_eq!(body.phis(), p.phis());
        assert!(apply_defect(&p, &cfg(DefectMode::PruneBody, 4, 0.0)).is_err());
    }

    #[test]
    fn noise_is_one_sided_and_bounded() {
        let p = plan_with(&[0.3, 0.1, 0.2]);
        let noisy = apply_defect(&p, &cfg(DefectMode::NoiseTail, 2, 0.5)).unwrap();
        let (a, b) = (p.thetas(), noisy.thetas());
        assert_eq!(a[1], b[1]);
        for k in [0, 2] {
            assert!(b[k] >= a[k] && b[k] < a[k] + 0.5);
        }
        let same = apply_defect(&p, &cfg(DefectMode::NoiseBody, 3, 0.0)).unwrap();
        assert_eq!(same, p);
        assert!(apply_defect(&p, &cfg(DefectMode::NoiseBody, 1, -0.1)).is_err());
    }

    #[test]
    fn full_body_prune_zeroes_everything() {
        let u = haar_random_unitary(6, RngSeed::new(2, 0)).unwrap();
        let plan = decompose(&u).unwrap();
        let out = apply_defect(&plan, &cfg(DefectMode::PruneBody, 15, 0.0)).unwrap();
        assert!(out.thetas().iter().all(|&t| t == 0.0));
        for (a, b) in out.blocks.iter().zip(&plan.blocks) {
            assert_eq!((a.m, a.l, a.phi), (b.m, b.l, b.phi));
        }
        assert_eq!(out.diag, plan.diag);
    }

    #[test]
    fn same_seed_same_draw_per_block() {
        let u = haar_random_unitary(8, RngSeed::new(3, 0)).unwrap();
        let plan = decompose(&u).unwrap();
        let small = apply_defect(&plan, &cfg(DefectMode::NoiseBody, 5, 0.2)).unwrap();
        let large = apply_defect(&plan, &cfg(DefectMode::NoiseBody, 20, 0.2)).unwrap();
        let order = sorted_theta_set(&plan);
        for &k in &order.order()[..5] {
            assert_eq!(small.blocks[k].theta, large.blocks[k].theta);
        }
    }

    #[test]
    fn order_must_be_a_permutation() {
        assert!(SortedThetaSet::from_order(vec![0, 0, 1]).is_err());
        assert!(SortedThetaSet::from_order(vec![0, 3, 1]).is_err());
        assert!(SortedThetaSet::from_order(vec![2, 0, 1]).is_ok());
    }
}
