//! Dense numerical kernels: QR factorization and back substitution, symmetric
//! eigendecomposition, thin SVD, and the ℓ₂-ball trust-region subproblem.
//!
//! These are the O(d³)/O(nl·min(n,l)) building blocks the solvers compose.
//! All routines are pure functions of their inputs; returned factorizations
//! are immutable values safe to share across threads.

mod eigen;
mod qr;
mod svd;
mod trust_region;

pub use eigen::{sym_eig, SymEigen};
pub use qr::{back_substitute, back_substitute_matrix, qr_decompose, QRFactors};
pub use svd::{thin_svd, ThinSVD};
pub use trust_region::{trust_region_solve, TrustRegionProblem};
