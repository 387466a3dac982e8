//! Slow, obviously-correct reference implementations used only by tests.
//!
//! Everything in this crate exists to cross-check the production numerics in
//! `primo-core` with an *independent* algorithm family:
//!
//! - [`dense`]: triple-loop matrix multiply and LU-with-partial-pivoting
//!   solves (checks the QR + back-substitution path);
//! - [`jacobi`]: cyclic Jacobi symmetric eigensolver (checks the
//!   tridiagonalization-based production eigensolver and the thin SVD);
//! - [`kron`]: explicit materialization of the block-diagonal operator
//!   `C = I_d ⊗ (1/n)Yᵀ` and projected gradient descent for the constrained
//!   least-squares projection (checks the matrix-free spectrum path and the
//!   secular-equation trust-region solver);
//! - [`quadprog`]: projected gradient descent on the ℓ₂ ball (checks the
//!   closed-form trust-region solutions by objective value);
//! - [`sweep`]: brute-force neighboring-dataset sensitivity sweeps (checks
//!   that the analytic sensitivity bounds dominate reality);
//! - [`stats`]: normal CDF and Kolmogorov–Smirnov distance for calibration
//!   tests.
//!
//! This crate is consumed exclusively as a dev-dependency, so production
//! binaries never link it, and none of its routines share code with the
//! implementation paths they validate. Oracles favor clarity over speed and
//! enforce small-scale guards where materialization would otherwise explode.

pub mod dense;
pub mod jacobi;
pub mod kron;
pub mod quadprog;
pub mod stats;
pub mod sweep;
