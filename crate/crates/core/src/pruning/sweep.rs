use rayon::prelude::*;

use super::defect::{apply_defect_with_order, sorted_theta_set, DefectConfig, DefectMode, SortedThetaSet};
use crate::error::{Error, Result};
use crate::mesh::{block_count, decompose, reconstruct, MeshPlan};
use crate::unitary::{fidelity, haar_random_unitary, ComplexMatrix, RngSeed};

/// Stream offset separating noise draws from the Haar draw of a realization.
const NOISE_STREAM: u64 = 0x6e6f697365;

/// One fidelity measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub mode: DefectMode,
    /// Noise amplitude in radians; 0 for prune rows.
    pub delta0: f64,
    /// Realized defect ratio `sigma / (n (n - 1) / 2)`.
    pub ratio: f64,
    pub realization: u64,
    pub fidelity: f64,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n: usize,
    pub ensemble_size: usize,
    /// Requested defect ratios in `[0, 1]`.
    pub ratio_grid: Vec<f64>,
    /// Noise amplitudes in radians.
    pub delta0_list: Vec<f64>,
    pub base_seed: u64,
    /// Modes to evaluate, emitted in [`DefectMode`] order.
    pub modes: Vec<DefectMode>,
}

impl SweepConfig {
    pub fn new(n: usize, ensemble_size: usize, ratio_grid: Vec<f64>, delta0_list: Vec<f64>, base_seed: u64) -> Self {
        Self {
            n,
            ensemble_size,
            ratio_grid,
            delta0_list,
            base_seed,
            modes: DefectMode::ALL.to_vec(),
        }
    }
}

/// `0, step, 2 step, ...` up to and including 1.
pub fn ratio_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::invalid(format!("ratio step must be in (0, 1], got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|k| (k as f64 * step).min(1.0)).collect();
    if *grid.last().unwrap() < 1.0 - 1e-12 {
        grid.push(1.0);
    }
    Ok(grid)
}

/// Distinct defect counts `round(ratio * total)` for a ratio grid, ascending.
pub fn sigma_grid(ratios: &[f64], total: usize) -> Result<Vec<usize>> {
    let mut sigmas = Vec::with_capacity(ratios.len());
    for &r in ratios {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("defect ratio {r} outside [0, 1]")));
        }
        sigmas.push((r * total as f64).round() as usize);
    }
    sigmas.sort_unstable();
    sigmas.dedup();
    Ok(sigmas)
}

pub(crate) fn check_modes(modes: &[DefectMode], delta0_list: &[f64]) -> Result<Vec<DefectMode>> {
    let mut modes = modes.to_vec();
    modes.sort();
    modes.dedup();
    if modes.is_empty() {
        return Err(Error::invalid("no defect modes selected"));
    }
    if let Some(d) = delta0_list.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::invalid(format!(
            "delta0 must be finite and non-negative, got {d}"
        )));
    }
    if modes.iter().any(|m| m.is_noise()) && delta0_list.is_empty() {
        return Err(Error::invalid("noise modes need at least one delta0"));
    }
    Ok(modes)
}

/// All rows for one realization, ordered by (mode, delta0, ratio).
#[allow(clippy::too_many_arguments)]
pub(crate) fn sweep_plan(
    plan: &MeshPlan,
    target: &ComplexMatrix,
    order: &SortedThetaSet,
    sigmas: &[usize],
    modes: &[DefectMode],
    delta0_list: &[f64],
    realization: u64,
    noise_seed: RngSeed,
) -> Result<Vec<SweepRow>> {
    let total = plan.blocks.len();
    let mut deltas = delta0_list.to_vec();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let mut rows = Vec::new();
    for &mode in modes {
        let amplitudes: &[f64] = if mode.is_noise() { &deltas } else { &[0.0] };
        for &delta0 in amplitudes {
            for &sigma in sigmas {
                let cfg = DefectConfig {
                    mode,
                    sigma,
                    delta0,
                    seed: noise_seed,
                };
                let defective = apply_defect_with_order(plan, order, &cfg)?;
                let f = fidelity(&reconstruct(&defective)?, target)?;
                rows.push(SweepRow {
                    n: plan.n,
                    mode,
                    delta0,
                    ratio: if total == 0 { 0.0 } else { sigma as f64 / total as f64 },
                    realization,
                    fidelity: f,
                });
            }
        }
    }
    Ok(rows)
}

/// Haar draw and decomposition for realization `index` of `base_seed`.
pub fn realization_plan(n: usize, base_seed: u64, index: u64) -> Result<(ComplexMatrix, MeshPlan)> {
    let u = haar_random_unitary(n, RngSeed::new(base_seed, index))?;
    let plan = decompose(&u)?;
    Ok((u, plan))
}

/// Seed for the noise draws of realization `index`.
pub fn noise_seed(base_seed: u64, index: u64) -> RngSeed {
    RngSeed::new(base_seed, index).child(NOISE_STREAM)
}

/// Pruning and noise sweep with each circuit ranked by its own `theta`.
///
/// Realizations run in parallel; rows come back sorted by (realization,
/// mode, delta0, ratio) regardless of scheduling.
pub fn fidelity_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let total = block_count(cfg.n).ok_or_else(|| Error::invalid("mesh size overflows"))?;
    if cfg.n < 2 {
        return Err(Error::invalid("sweeps need n >= 2"));
    }
    let sigmas = sigma_grid(&cfg.ratio_grid, total)?;
    let modes = check_modes(&cfg.modes, &cfg.delta0_list)?;
    let per_realization: Vec<Vec<SweepRow>> = (0..cfg.ensemble_size as u64)
        .into_par_iter()
        .map(|r| {
            let (u, plan) = realization_plan(cfg.n, cfg.base_seed, r)?;
            let order = sorted_theta_set(&plan);
            sweep_plan(
                &plan,
                &u,
                &order,
                &sigmas,
                &modes,
                &cfg.delta0_list,
                r,
                noise_seed(cfg.base_seed, r),
            )
        })
        .collect::<Result<_>>()?;
    Ok(per_realization.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction() {
        let g = ratio_grid(0.25).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(ratio_grid(0.01).unwrap().len(), 101);
        assert_eq!(ratio_grid(0.3).unwrap().last(), Some(&1.0));
        assert!(ratio_grid(0.0).is_err());
        assert_eq!(sigma_grid(&[0.0, 0.001, 0.5, 1.0], 10).unwrap(), vec![0, 5, 10]);
        assert!(sigma_grid(&[1.5], 10).is_err());
    }

    #[test]
    fn zero_ratio_rows_are_exact() {
        let cfg = SweepConfig::new(6, 3, vec![0.0, 0.5], vec![0.1], 11);
        let rows = fidelity_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 3 * 4 * 2);
        for r in rows.iter().filter(|r| r.ratio == 0.0) {
            assert!((r.fidelity - 1.0).abs() < 1e-10, "{r:?}");
        }
        for r in &rows {
            assert!(r.fidelity <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn rows_are_sorted_and_deterministic() {
        let mut cfg = SweepConfig::new(5, 4, vec![0.0, 0.3, 0.6], vec![0.2, 0.1], 3);
        let a = fidelity_sweep(&cfg).unwrap();
        let b = fidelity_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        let key = |r: &SweepRow| (r.realization, r.mode, r.delta0.to_bits(), r.ratio.to_bits());
        assert!(a.windows(2).all(|w| key(&w[0]) < key(&w[1])));
        cfg.modes = vec![DefectMode::NoiseBody, DefectMode::PruneBody];
        let sub = fidelity_sweep(&cfg).unwrap();
        assert!(sub.iter().all(|r| r.mode.is_body()));
        assert_eq!(sub.len(), 4 * 3 * 3);
    }

    #[test]
    fn noise_modes_need_amplitudes() {
        let cfg = SweepConfig::new(4, 1, vec![0.0], vec![], 1);
        assert!(fidelity_sweep(&cfg).is_err());
    }
}
