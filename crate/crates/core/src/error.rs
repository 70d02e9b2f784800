//! Error type shared across the toolkit.

use thiserror::Error;

/// Toolkit-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A partition failed validation (overlapping blocks, elements outside
    /// the ground set, empty blocks, or blocks not covering the ground set).
    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    /// An enumeration was requested above the configured size cap.
    #[error("ground set of size {size} exceeds the enumeration cap {cap}")]
    SizeCap { size: usize, cap: usize },

    /// Inputs violate a documented precondition (wrong ground set, crossing
    /// partition where a non-crossing one is required, odd cardinality, ...).
    #[error("{0}")]
    Domain(String),

    /// A block mixes positions from different families where only
    /// single-family blocks are supported.
    #[error("block {0:?} mixes families; only single-family blocks are supported here")]
    MixedBlock(Vec<u32>),

    /// An internal invariant failed; indicates invalid input slipped through
    /// validation or a bug.
    #[error("internal consistency violation: {0}")]
    Inconsistent(String),

    /// A structural identity that must hold mathematically was violated.
    #[error("structure violation: {0}")]
    StructureViolation(String),

    /// Matrix dimensions do not conform.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Invalid run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Failed to parse a textual representation.
    #[error("parse error: {0}")]
    Parse(String),

    /// A Monte Carlo replicate produced an unusable value.
    #[error("replicate {index}: {message}")]
    Replicate { index: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
