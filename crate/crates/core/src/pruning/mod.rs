//! Pruning and noise on sorted rotation sets, fidelity sweeps, thresholds.

mod defect;
mod io;
mod sweep;
mod threshold;

pub use defect::{apply_defect, apply_defect_with_order, sorted_theta_set, DefectConfig, DefectMode, SortedThetaSet};
pub use io::{read_sweep_csv, write_sweep_csv, write_threshold_csv, SWEEP_HEADER, THRESHOLD_HEADER};
pub(crate) use sweep::{check_modes, sweep_plan};
pub use sweep::{fidelity_sweep, noise_seed, ratio_grid, realization_plan, sigma_grid, SweepConfig, SweepRow};
pub use threshold::{pruning_threshold, thresholds, ThresholdRow};
