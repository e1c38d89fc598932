//! Exhaustive exploration of Cayley graphs with exact element identity.
//!
//! [`bfs::bfs_ball`] computes the word metric out to a radius by layered
//! search over canonical element encodings (a bucket queue handles weighted
//! generating sets). On top of the norm table sit geodesic counting by
//! layered dynamic programming ([`growth`]), the geodesic-family and
//! barycenter-inequality harnesses ([`family`]), and a checksummed cache file
//! format ([`persist`]).

pub mod bfs;
pub mod family;
pub mod growth;
pub mod persist;

pub use bfs::{bfs_ball, BfsOptions, NormTable};
pub use family::{
    by_bound_sweep, family_words, norm_gap_check, verify_family, ByBoundReport, FamilyReport,
    FamilyVerdict, NormGapReport, NormGapStatus,
};
pub use growth::{brute_force_gamma, geodesic_counts, growth_report, GrowthReport};
pub use persist::{load_table, save_table};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("norm table radius {radius} is insufficient (need at least {needed})")]
    OutOfRadius { radius: u32, needed: u32 },
    #[error("memory budget of {budget} elements exceeded while building layer {layer}")]
    MemoryBudgetExceeded { budget: usize, layer: u32 },
    #[error("unsupported norm-table format: expected `{expected}`, found `{found}`")]
    FormatVersionMismatch { expected: String, found: String },
    #[error("norm table was built for a different group or generating set")]
    FingerprintMismatch,
    #[error("corrupt norm-table file: {0}")]
    CorruptFile(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
