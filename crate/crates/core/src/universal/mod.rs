//! Ensemble-averaged rotations per mesh position and sweeps that rank
//! blocks by those averages instead of each circuit's own angles.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::f64_17;
use crate::mesh::{block_count, mesh_columns, MeshPlan};
use crate::pruning::{
    check_modes, noise_seed, realization_plan, sigma_grid, sweep_plan, DefectMode, SortedThetaSet, SweepRow,
};

/// Per-position means over an ensemble of plans. Positions follow the
/// block order of the plans.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionStats {
    pub n: usize,
    pub ensemble_size: usize,
    /// One-based `(m, l)` labels.
    pub positions: Vec<(usize, usize)>,
    /// Physical column of each position in the rectangular mesh.
    pub mesh_column: Vec<usize>,
    pub mean_theta: Vec<f64>,
    pub mean_phi: Vec<f64>,
    /// Positions ranked by ascending mean `theta`, ties by `(l, m)`.
    pub universal_order: SortedThetaSet,
}

impl PositionStats {
    /// One-based rank of each position in the universal order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.positions.len()];
        for (r, &p) in self.universal_order.order().iter().enumerate() {
            rank[p] = r + 1;
        }
        rank
    }

    /// Writes `m, l, mesh_column, mean_theta, mean_phi, rank`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["m", "l", "mesh_column", "mean_theta", "mean_phi", "rank"])?;
        let ranks = self.ranks();
        for (i, &(m, l)) in self.positions.iter().enumerate() {
            w.write_record([
                m.to_string(),
                l.to_string(),
                self.mesh_column[i].to_string(),
                f64_17(self.mean_theta[i]),
                f64_17(self.mean_phi[i]),
                ranks[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Arithmetic means of `theta` and `phi` per block position, summed in
/// plan order.
pub fn average_architecture(plans: &[MeshPlan]) -> Result<PositionStats> {
    let first = plans
        .first()
        .ok_or_else(|| Error::InsufficientData("no plans to average".into()))?;
    let positions: Vec<(usize, usize)> = first.blocks.iter().map(|b| (b.m, b.l)).collect();
    let mut sum_theta = vec![0.0; positions.len()];
    let mut sum_phi = vec![0.0; positions.len()];
    for (k, plan) in plans.iter().enumerate() {
        if plan.n != first.n {
            return Err(Error::invalid(format!(
                "plan {k} has n={}, expected {}",
                plan.n, first.n
            )));
        }
        if plan.blocks.len() != positions.len() || plan.blocks.iter().zip(&positions).any(|(b, p)| (b.m, b.l) != *p) {
            return Err(Error::invalid(format!("plan {k} has a different block layout")));
        }
        for (i, b) in plan.blocks.iter().enumerate() {
            sum_theta[i] += b.theta;
            sum_phi[i] += b.phi;
        }
    }
    let count = plans.len() as f64;
    let mean_theta: Vec<f64> = sum_theta.iter().map(|s| s / count).collect();
    let mean_phi: Vec<f64> = sum_phi.iter().map(|s| s / count).collect();
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| {
        mean_theta[a]
            .total_cmp(&mean_theta[b])
            .then((positions[a].1, positions[a].0).cmp(&(positions[b].1, positions[b].0)))
    });
    Ok(PositionStats {
        n: first.n,
        ensemble_size: plans.len(),
        mesh_column: mesh_columns(first),
        positions,
        mean_theta,
        mean_phi,
        universal_order: SortedThetaSet::from_order(order)?,
    })
}

#[derive(Clone, Debug)]
pub struct UniversalConfig {
    pub n: usize,
    /// Realizations `0..train_size` build the averages.
    pub train_size: usize,
    /// Realizations `train_size..train_size + test_size` are evaluated.
    pub test_size: usize,
    pub ratio_grid: Vec<f64>,
    /// Noise amplitudes in radians.
    pub delta0_list: Vec<f64>,
    pub base_seed: u64,
    pub modes: Vec<DefectMode>,
}

impl UniversalConfig {
    pub fn new(
        n: usize,
        train_size: usize,
        test_size: usize,
        ratio_grid: Vec<f64>,
        delta0_list: Vec<f64>,
        base_seed: u64,
    ) -> Self {
        Self {
            n,
            train_size,
            test_size,
            ratio_grid,
            delta0_list,
            base_seed,
            modes: DefectMode::ALL.to_vec(),
        }
    }
}

/// Averages a training ensemble, then sweeps disjoint test circuits with
/// ranks fixed by the universal order. Row realization ids are the test
/// circuits' stream indices.
pub fn universal_defect_sweep(cfg: &UniversalConfig) -> Result<(PositionStats, Vec<SweepRow>)> {
    if cfg.train_size == 0 || cfg.test_size == 0 {
        return Err(Error::invalid("train and test ensembles must be non-empty"));
    }
    if cfg.n < 2 {
        return Err(Error::invalid("sweeps need n >= 2"));
    }
    let total = block_count(cfg.n).ok_or_else(|| Error::invalid("mesh size overflows"))?;
    let sigmas = sigma_grid(&cfg.ratio_grid, total)?;
    let modes = check_modes(&cfg.modes, &cfg.delta0_list)?;
    let train: Vec<MeshPlan> = (0..cfg.train_size as u64)
        .into_par_iter()
        .map(|r| realization_plan(cfg.n, cfg.base_seed, r).map(|(_, p)| p))
        .collect::<Result<_>>()?;
    let stats = average_architecture(&train)?;
    let start = cfg.train_size as u64;
    let rows: Vec<Vec<SweepRow>> = (start..start + cfg.test_size as u64)
        .into_par_iter()
        .map(|r| {
            let (u, plan) = realization_plan(cfg.n, cfg.base_seed, r)?;
            sweep_plan(
                &plan,
                &u,
                &stats.universal_order,
                &sigmas,
                &modes,
                &cfg.delta0_list,
                r,
                noise_seed(cfg.base_seed, r),
            )
        })
        .collect::<Result<_>>()?;
    Ok((stats, rows.into_iter().flatten().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::decompose;
    use crate::unitary::{haar_random_unitary, RngSeed};

    fn plans(n: usize, count: u64) -> Vec<MeshPlan> {
        (0..count)
            .map(|r| decompose(&haar_random_unitary(n, RngSeed::new(9, r)).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn single_plan_means_are_its_values() {
        let p = plans(6, 1);
        let s = average_architecture(&p).unwrap();
        assert_eq!(s.mean_theta, p[0].thetas());
        assert_eq!(s.mean_phi, p[0].phis());
        assert_eq!(s.positions.len(), 15);
    }

    #[test]
    fn mixed_sizes_and_empty_lists_fail() {
        let mut p = plans(4, 2);
        p.extend(plans(5, 1));
        assert!(matches!(average_architecture(&p), Err(Error::InvalidArgument(_))));
        assert!(matches!(average_architecture(&[]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn universal_order_is_sorted_with_position_ties() {
        let mut p = plans(5, 1);
        for b in &mut p[0].blocks {
            b.theta = 0.5;
        }
        let s = average_architecture(&p).unwrap();
        let keys: Vec<(usize, usize)> = s
            .universal_order
            .order()
            .iter()
            .map(|&i| (s.positions[i].1, s.positions[i].0))
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));

        let s = average_architecture(&plans(8, 5)).unwrap();
        let sorted: Vec<f64> = s.universal_order.order().iter().map(|&i| s.mean_theta[i]).collect();
        assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn mesh_layout_is_rectangular() {
        for n in [4, 5, 8] {
            let s = average_architecture(&plans(n, 1)).unwrap();
            let mut per_column = vec![0usize; n];
            for (&(m, _), &c) in s.positions.iter().zip(&s.mesh_column) {
                assert!(c < n, "column {c} for n={n}");
                // alternating even/odd pairs
                assert_eq!((m - 1) % 2, c % 2, "n={n} m={m} column={c}");
                per_column[c] += 1;
            }
            assert_eq!(per_column.iter().sum::<usize>(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn zero_ratio_gives_unit_fidelity() {
        let cfg = UniversalConfig::new(6, 3, 2, vec![0.0, 0.4], vec![0.2], 4);
        let (stats, rows) = universal_defect_sweep(&cfg).unwrap();
        assert_eq!(stats.ensemble_size, 3);
        assert!(rows.iter().all(|r| r.realization >= 3));
        for r in rows.iter().filter(|r| r.ratio == 0.0) {
            assert!((r.fidelity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn csv_has_one_row_per_position() {
        let s = average_architecture(&plans(5, 2)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 11);
        assert!(text.starts_with("m,l,mesh_column,mean_theta,mean_phi,rank\n"));
    }
}
