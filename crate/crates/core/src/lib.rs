//! Differentially private least squares across many outcomes.
//!
//! This crate implements sufficient-statistics-perturbation regression where
//! `l` regressions on a shared private design matrix `X` (n×d) reuse a single
//! noisy covariance release `Î = (1/n)XᵀX + E₁ + λI`, while the association
//! term `(1/n)XᵀY` is released either coordinate-wise through the Gaussian
//! mechanism or through a Kronecker-accelerated projection mechanism that
//! projects the noised answers back onto the set of answers attainable by a
//! feasible design matrix.
//!
//! Layering, bottom to top:
//!
//! - [`matrix`]: dense row-major matrices and the multiply kernels;
//! - [`linalg`]: QR / back substitution, symmetric eigendecomposition, thin
//!   SVD, and the ℓ₂-ball trust-region subproblem solver;
//! - [`rng`]: seeded, phase-addressed ChaCha streams and Gaussian sampling;
//! - [`privacy`]: the (ε, δ) calibration constant, Gaussian mechanisms, and
//!   sensitivity bounds;
//! - [`query`]: inner-product queries, the implicit operator
//!   `C = I_d ⊗ (1/n)Yᵀ`, its spectrum via the smaller-side Gram of `Y`, and the
//!   projection mechanism;
//! - [`solver`]: the end-to-end solvers (shared-covariance, subsampled,
//!   per-regression baseline) and the excess-loss metrics.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! only enables wall-clock phase timings on solver outputs. All randomness is
//! reproducible from explicit seeds — see [`rng`] for the stream discipline —
//! and identical inputs yield bit-identical outputs.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// Index loops in the numeric kernels routinely walk several arrays in
// lockstep or feed the index into window arithmetic; rewriting them around a
// single iterator obscures the math.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod math;
pub mod matrix;
pub mod privacy;
pub mod query;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::Matrix;
