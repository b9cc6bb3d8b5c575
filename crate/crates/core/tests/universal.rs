use meshprune::mesh::{reconstruct, MeshPlan};
use meshprune::pruning::{
    apply_defect, apply_defect_with_order, pruning_threshold, ratio_grid, realization_plan, DefectConfig, DefectMode,
};
use meshprune::unitary::fidelity;
use meshprune::universal::{average_architecture, universal_defect_sweep, PositionStats, UniversalConfig};
use meshprune::RngSeed;
use std::f64::consts::PI;

fn ensemble(n: usize, seed: u64, count: u64) -> Vec<MeshPlan> {
    (0..count).map(|r| realization_plan(n, seed, r).unwrap().1).collect()
}

fn boundary_and_interior(stats: &PositionStats) -> (f64, f64) {
    let n = stats.n;
    let (mut b, mut nb, mut i, mut ni) = (0.0, 0, 0.0, 0);
    for (&(m, _), &t) in stats.positions.iter().zip(&stats.mean_theta) {
        if m == 1 || m == n - 1 {
            b += t;
            nb += 1;
        } else {
            i += t;
            ni += 1;
        }
    }
    (b / nb as f64, i / ni as f64)
}

#[test]
fn grand_mean_phase_is_pi() {
    let stats = average_architecture(&ensemble(32, 1, 100)).unwrap();
    let grand = stats.mean_phi.iter().sum::<f64>() / stats.mean_phi.len() as f64;
    assert!((grand - PI).abs() < 0.05, "grand mean {grand}");
}

#[test]
fn boundary_blocks_rotate_more() {
    let stats = average_architecture(&ensemble(32, 1, 100)).unwrap();
    let (b, i) = boundary_and_interior(&stats);
    assert!(b > i, "boundary {b} interior {i}");
}

#[test]
fn universal_order_is_a_bijection_and_layout_fills_columns() {
    let stats = average_architecture(&ensemble(9, 2, 10)).unwrap();
    let mut seen = stats.universal_order.order().to_vec();
    seen.sort_unstable();
    assert_eq!(seen, (0..36).collect::<Vec<_>>());
    let mut per_column = [0usize; 9];
    for &c in &stats.mesh_column {
        per_column[c] += 1;
    }
    assert_eq!(per_column.iter().sum::<usize>(), 36);
    assert!(per_column.iter().all(|&c| c == 4));
}

#[test]
fn own_order_prunes_at_least_as_well_as_universal_order() {
    let n = 32;
    let stats = average_architecture(&ensemble(n, 3, 100)).unwrap();
    let total = n * (n - 1) / 2;
    for ratio in [0.1, 0.2, 0.3, 0.5] {
        let sigma = (ratio * total as f64).round() as usize;
        let cfg = DefectConfig {
            mode: DefectMode::PruneBody,
            sigma,
            delta0: 0.0,
            seed: RngSeed::new(0, 0),
        };
        let mut diff = 0.0;
        for r in 100..130 {
            let (u, plan) = realization_plan(n, 3, r).unwrap();
            let own = fidelity(&reconstruct(&apply_defect(&plan, &cfg).unwrap()).unwrap(), &u).unwrap();
            let uni = fidelity(
                &reconstruct(&apply_defect_with_order(&plan, &stats.universal_order, &cfg).unwrap()).unwrap(),
                &u,
            )
            .unwrap();
            diff += own - uni;
        }
        assert!(diff / 30.0 >= -0.01, "ratio {ratio}: mean gap {}", diff / 30.0);
    }
}

#[test]
fn universal_thresholds_grow_with_size() {
    let delta0 = 0.2 * PI;
    let t: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let mut cfg = UniversalConfig::new(n, 100, 30, ratio_grid(0.02).unwrap(), vec![delta0], 4);
            cfg.modes = vec![DefectMode::PruneBody, DefectMode::NoiseBody];
            let (_, rows) = universal_defect_sweep(&cfg).unwrap();
            pruning_threshold(&rows, n, delta0, DefectMode::NoiseBody).unwrap()
        })
        .collect();
    assert!(t.windows(2).all(|w| w[1] > w[0]), "{t:?}");
}

#[test]
fn universal_threshold_is_positive_at_n32_for_tenth_pi() {
    let delta0 = 0.1 * PI;
    let mut cfg = UniversalConfig::new(32, 100, 100, ratio_grid(0.01).unwrap(), vec![delta0], 2);
    cfg.modes = vec![DefectMode::PruneBody, DefectMode::NoiseBody];
    let (_, rows) = universal_defect_sweep(&cfg).unwrap();
    let t = pruning_threshold(&rows, 32, delta0, DefectMode::NoiseBody).unwrap();
    assert!(t > 0.0, "threshold {t}");
}
