use alloc::string::String;

use thiserror::Error;

/// Failures raised by the core engines.
///
/// Numerically borderline inputs are reported through [`Error::Indeterminate`]
/// rather than being folded into one side of a discrete decision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("element is not in the Lie algebra of the group: {0}")]
    NotInAlgebra(String),

    #[error("element is not Hermitian (anti-Hermitian defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("element is not of Hermitian type: {0}")]
    NotHermitianType(String),

    #[error("matrix is singular (smallest singular value {smallest:.3e})")]
    Singular { smallest: f64 },

    #[error("elements are not equivalent under the unipotent radical")]
    NotEquivalent,

    #[error("representation violates the bracket relation on pair ({first}, {second}): residual {residual:.3e}")]
    BracketMismatch {
        first: usize,
        second: usize,
        residual: f64,
    },

    #[error("representation is not unitary on basis element {index}: residual {residual:.3e}")]
    NotUnitary { index: usize, residual: f64 },

    #[error("indeterminate at tolerance: {0}")]
    Indeterminate(String),

    #[error("exponential overflow along the flow")]
    Overflow,

    #[error("operation not supported for this group: {0}")]
    Unsupported(String),

    #[error("degeneration certificate failed: {0}")]
    DegenerationFailed(String),

    #[error("point is not semistable (destabilizing value {value:.6e})")]
    NotSemistable { value: f64 },

    #[error("flow did not converge: {0}")]
    NoConvergence(String),

    #[error("certificate does not check: {0}")]
    Certificate(String),
}

pub type Result<T> = core::result::Result<T, Error>;
