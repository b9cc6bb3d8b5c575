//! Heavy-tail model fitting: power law, truncated power law, log-normal and
//! exponential, each by maximum likelihood with KS-selected lower bounds.

mod fit;
pub mod gamma;
mod ks;
mod model;
pub mod optimize;
mod sample;
pub mod synthetic;

pub use fit::{
    fit_exponential, fit_log_normal, fit_model, fit_power_law, fit_power_law_cutoff, scan_candidates,
    tail_log_likelihood, TAIL_MIN,
};
pub use ks::{ks_distance, ks_distance_sorted, uniformity_ks};
pub use model::{model_ccdf, model_pdf, FitResult, ModelKind, ModelParams};
pub use optimize::{nelder_mead, Minimum, NelderMeadOptions};
pub use sample::{log_binned_pdf, DensityBin, Sample};
