//! Error type shared by every fallible operation in the crate.

use alloc::string::String;

/// Convenience alias used by all public APIs.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building or analyzing measurements.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    /// Two objects that must live on the same space do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Raw data length does not fit the requested shape.
    #[error("data of length {len} cannot fill a {rows}x{cols} matrix")]
    ShapeMismatch { len: usize, rows: usize, cols: usize },

    /// A matrix entry is NaN or infinite.
    #[error("matrix contains a non-finite entry")]
    NonFinite,

    /// An operator that must be Hermitian is not.
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    /// An operator that must be positive semidefinite is not.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// A density matrix failed one of its defining properties.
    #[error("invalid quantum state: {reason}")]
    InvalidState { reason: &'static str },

    /// A measurement failed a POVM axiom at construction or validation.
    #[error("invalid measurement `{name}`: {reason}")]
    InvalidMeasurement { name: String, reason: &'static str },

    /// Conditioning on an outcome whose probability is numerically zero.
    #[error("outcome probability {probability:e} is too small to condition on")]
    ZeroProbabilityOutcome { probability: f64 },

    /// A trace that should be real carries a significant imaginary part.
    #[error("trace has non-negligible imaginary part {imaginary:e}")]
    NonRealTrace { imaginary: f64 },

    /// The iterative eigensolver did not reach its threshold.
    #[error("eigensolver failed to converge")]
    NoConvergence,

    /// Tolerances must be finite and nonnegative.
    #[error("invalid tolerance: must be finite and nonnegative")]
    InvalidTolerance,

    /// Sampling is defined for the sqrt convention only; literal joint
    /// weights need not form a probability distribution.
    #[error("operation requires the sqrt convention")]
    UnsupportedConvention,

    /// Sweep sample sizes must be nonempty, positive, and strictly increasing.
    #[error("sweep sizes must be nonempty, positive, and strictly increasing")]
    InvalidSweepSizes,

    /// A scan grid needs at least two steps per axis.
    #[error("grid needs at least 2 steps per axis, got {steps}")]
    GridTooSmall { steps: usize },

    /// Amplitude vectors cannot be normalized if they are all zero.
    #[error("state amplitudes are all zero")]
    ZeroStateVector,

    /// A simulation was requested with no samples.
    #[error("sample count must be at least 1")]
    ZeroSamples,
}
