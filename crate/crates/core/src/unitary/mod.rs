//! Dense complex matrices, seeded Haar sampling and operator metrics.

mod haar;
mod matrix;
mod metrics;
mod seed;

pub use haar::haar_random_unitary;
pub use matrix::ComplexMatrix;
pub use metrics::{cost_j, cost_j_trace_form, fidelity, unitarity_error};
pub use seed::RngSeed;
