//! Numerical thresholds shared by the engines.
//!
//! Every discrete decision compares a quantity against one of these; values
//! falling between a `*_ZERO` and the matching `*_BAND` are reported as
//! indeterminate instead of being rounded to either side.

/// Relative gap under which two eigenvalues are treated as equal.
pub const EIGEN_CLUSTER: f64 = 1e-9;
/// Clusters closer than this (relative) make the spectrum indeterminate.
pub const EIGEN_BAND: f64 = 1e-6;
/// Imaginary parts at most this (relative) are rounding noise.
pub const IMAG_ZERO: f64 = 1e-9;
/// Imaginary parts above this (relative) are genuinely non-real.
pub const IMAG_BAND: f64 = 1e-6;
/// Singular values at most this times the scale count as zero.
pub const RANK_ZERO: f64 = 1e-10;
/// Singular values in `(RANK_ZERO, RANK_BAND]` times the scale are ambiguous.
pub const RANK_BAND: f64 = 1e-7;
/// Principal-angle threshold for subspace equality.
pub const SUBSPACE: f64 = 1e-8;
/// Coordinates at most this times `‖v‖` are outside the support.
pub const SUPPORT_ZERO: f64 = 1e-12;
/// Coordinates in `(SUPPORT_ZERO, SUPPORT_BAND]` times `‖v‖` are ambiguous.
pub const SUPPORT_BAND: f64 = 1e-9;
/// Bracket and unitarity checks on representation data.
pub const BRACKET: f64 = 1e-10;
/// Generic tolerance for identities that hold exactly in exact arithmetic.
pub const IDENTITY: f64 = 1e-8;
/// Default target for `‖μ‖` in descent.
pub const MOMENT: f64 = 1e-9;
/// Accumulated exponent norm after which a flow counts as leaving the orbit.
pub const DIVERGENCE: f64 = 40.0;
