//! Hard budgets and shared numeric thresholds.
//!
//! Every routine that enumerates lattice boxes, grids, or coefficient
//! supports checks one of these caps and fails with
//! [`Error::ResourceCap`](crate::Error::ResourceCap) instead of thrashing.
//! The thresholds below are referenced throughout the crate so that tests
//! and the CLI agree on a single set of conventions.

/// Maximum number of points a sampling grid may hold.
pub const GRID_POINT_CAP: usize = 1 << 24;

/// Maximum number of stored coefficients in a sparse trigonometric polynomial.
pub const SUPPORT_CAP: usize = 1 << 20;

/// Maximum number of coefficient pairs a single convolution may touch.
pub const PRODUCT_OP_CAP: u128 = 40_000_000;

/// Maximum number of lattice pairs a window report may enumerate.
pub const WINDOW_PAIR_CAP: u128 = 16_000_000;

/// Maximum number of lattice points enumerated when sharpening a tail bound.
pub const TAIL_ENUM_CAP: usize = 4_000_000;

/// Number of extra one-dimensional shells summed before the integral remainder.
pub const SHELL_EXTRA: i64 = 2048;

/// Largest truncation radius the doubling search will try.
pub const TRUNCATION_RADIUS_CAP: i64 = 1 << 22;

/// Largest convolution radius the subconvolutivity doubling loop will try.
pub const CONVOLUTION_RADIUS_CAP: i64 = 1 << 15;

/// Maximum Newton iterations for inversion / square-root refinement.
pub const NEWTON_MAX_ITERS: u32 = 100;

/// Smallest damping factor tried before a Newton step is accepted as-is.
pub const NEWTON_MIN_DAMPING: f64 = 1.0 / 64.0;

/// Sampled functions whose minimum modulus falls below this are not invertible.
pub const MIN_GRID_ABS: f64 = 1e-8;

/// Oversampling factor (relative to bandwidth) for pointwise pre-checks.
pub const OVERSAMPLE_FACTOR: usize = 4;

/// Minimum one-dimensional resolution of any oversampled pre-check grid.
pub const MIN_OVERSAMPLE_RESOLUTION: usize = 16;

/// Tolerance for treating two torus points as equal.
pub const POINT_TOL: f64 = 1e-12;

/// Tolerance for accepting a coefficient family as Hermitian (real-valued).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative stabilization tolerance for certification loops.
pub const DEFAULT_STABILIZATION_TOL: f64 = 1e-6;
