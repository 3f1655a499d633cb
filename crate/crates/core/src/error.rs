//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by torus, weight, algebra, and experiment routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two operands live on tori / lattices of different dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Binary operation between functions carrying different weights.
    #[error("operands carry different weights")]
    WeightMismatch,

    /// A constructor or routine was called with an out-of-range parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A tabulated weight was queried outside the stored box.
    #[error("frequency {0:?} lies outside the stored table box of radius {1}")]
    OutsideTable(Vec<i64>, i64),

    /// A computation would exceed a hard size/time budget.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Pointwise inversion rejected: the sampled function comes too close to zero.
    #[error("not invertible: sampled min |f| = {grid_min:.3e} is below {threshold:.1e}")]
    NotInvertible { grid_min: f64, threshold: f64 },

    /// Input violates a mathematical precondition (realness, positivity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A certification routine could not stabilize, so no constant is available.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
