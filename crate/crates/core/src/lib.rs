//! Programmable photonic mesh laboratory.
//!
//! Haar-random unitaries are factorized into a rectangular (Clements) mesh of
//! SU(2) blocks, the distribution of the internal rotation angle `theta` is
//! fitted with power-law, truncated power-law, log-normal and exponential
//! models, and fidelity is compared between pruned and noisy meshes.
//!
//! Module map:
//!
//! * [`unitary`] - dense complex matrices, Haar sampling, fidelity metrics
//! * [`mesh`] - block algebra, decomposition and reconstruction
//! * [`stats`] - maximum-likelihood fits and Kolmogorov-Smirnov selection
//! * [`pruning`] - body/tail pruning and noise, fidelity sweeps, thresholds
//! * [`universal`] - ensemble-averaged architecture and universal sweeps

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod mesh;
pub mod pruning;
pub mod stats;
pub mod unitary;
pub mod universal;

mod fmt;

pub use error::{Error, Result};
pub use mesh::{Block, MeshPlan};
pub use unitary::{ComplexMatrix, RngSeed};

/// Crate version recorded in experiment metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
