//! Rectangular (Clements) mesh of SU(2) blocks.

mod bloch;
mod block;
mod decompose;
mod plan;

pub use bloch::{bloch_transform_samples, BlochMode, BlochSampleSet};
pub use block::{
    block_matrix, commute_through_diagonal, embed_block, solve_nulling_left, solve_nulling_right, wrap_phase, Su2,
};
pub use decompose::{decompose, nulling_schedule, NullSide, NullStep};
pub use plan::{block_count, mesh_columns, reconstruct, Block, MeshPlan};
