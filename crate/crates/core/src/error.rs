//! Error type shared by the numeric and solver layers.
//!
//! Recoverable caller-facing failures (dimension mismatches, singular
//! triangular systems, domain violations) are surfaced as [`Error`] values;
//! violations of construction invariants (non-finite entries, inconsistent
//! buffer lengths) are programming bugs and panic via `assert!` instead.

use core::fmt;

/// Failure modes of the linear-algebra kernels and solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An operation requiring a square matrix received a rectangular one.
    NonSquare { rows: usize, cols: usize },
    /// Operand shapes are incompatible; `context` names the operation.
    DimMismatch { context: &'static str },
    /// A triangular solve hit a diagonal entry at or below the singularity
    /// threshold (`1e-12 · max |r_ii|`); `index` is the offending diagonal.
    SingularSystem { index: usize },
    /// The trust-region subproblem requires a positive semidefinite spectrum.
    NegativeEigenvalue { index: usize },
    /// A query referenced a coordinate outside `0..bound`.
    IndexOutOfRange { index: usize, bound: usize },
    /// Subsample size must satisfy `1 <= s <= n`.
    SubsampleOutOfRange { s: usize, n: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::NonSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            Error::DimMismatch { context } => {
                write!(f, "dimension mismatch in {context}")
            }
            Error::SingularSystem { index } => {
                write!(f, "singular system: diagonal entry {index} below threshold")
            }
            Error::NegativeEigenvalue { index } => {
                write!(f, "negative eigenvalue at position {index}; spectrum must be PSD")
            }
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range for dimension {bound}")
            }
            Error::SubsampleOutOfRange { s, n } => {
                write!(f, "subsample size {s} out of range for n = {n}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
