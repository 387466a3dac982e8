//! ℓ₂-ball-constrained quadratic minimization in an eigenbasis — the
//! trust-region subproblem
//!
//! ```text
//!     minimize   Σᵢ λᵢ xᵢ² − Σᵢ βᵢ xᵢ    subject to   ‖x‖₂ ≤ r
//! ```
//!
//! with λᵢ ≥ 0 sorted nonincreasing. Stationarity gives xᵢ(μ) =
//! βᵢ / (2(λᵢ + μ)) for a KKT multiplier μ ≥ 0; complementary slackness
//! picks μ = 0 when the unconstrained minimizer lies inside the ball, and
//! otherwise the unique μ > 0 solving the secular equation
//!
//! ```text
//!     Σᵢ βᵢ² / (4 (λᵢ + μ)²) = r².
//! ```
//!
//! The root is found by safeguarded Newton on the reparameterization
//! φ(μ) = 1/r − 1/‖x(μ)‖ (monotone decreasing, nearly linear in μ), with
//! the bracket [0, ‖β‖/(2r)] maintained throughout and bisection as the
//! fallback, so the iteration is globally convergent.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, norm2, sqrt};

/// Diagonalized trust-region subproblem: minimize Σ λᵢxᵢ² − βᵢxᵢ over the
/// ball ‖x‖₂ ≤ r. Eigenvalues must be nonnegative and sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct TrustRegionProblem {
    eigenvalues: Vec<f64>,
    rhs_coords: Vec<f64>,
    radius: f64,
}

impl TrustRegionProblem {
    /// Validates the PSD requirement; a negative eigenvalue is a domain
    /// error, while mismatched lengths or a bad radius are caller bugs.
    pub fn new(eigenvalues: Vec<f64>, rhs_coords: Vec<f64>, radius: f64) -> Result<Self> {
        assert_eq!(
            eigenvalues.len(),
            rhs_coords.len(),
            "trust region: eigenvalues and rhs coordinates must have equal length"
        );
        assert!(radius.is_finite() && radius >= 0.0, "trust region: radius must be finite and >= 0");
        assert!(
            eigenvalues.windows(2).all(|w| w[0] >= w[1]),
            "trust region: eigenvalues must be sorted nonincreasing"
        );
        if let Some(index) = eigenvalues.iter().position(|&l| l < 0.0) {
            return Err(Error::NegativeEigenvalue { index });
        }
        Ok(Self { eigenvalues, rhs_coords, radius })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn rhs_coords(&self) -> &[f64] {
        &self.rhs_coords
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Solves the subproblem, returning the minimizer's eigenbasis coordinates
/// and the KKT multiplier μ.
///
/// The interior case returns the exact coordinates βᵢ/(2λᵢ) with μ = 0 and
/// no root-finding; the boundary case satisfies |‖x(μ)‖ − r| ≤ 1e−10·r.
/// Among minimizers the minimum-norm one is returned (zero along
/// zero-eigenvalue directions with βᵢ = 0).
pub fn trust_region_solve(p: &TrustRegionProblem) -> (Vec<f64>, f64) {
    let lam = p.eigenvalues();
    let beta = p.rhs_coords();
    let r = p.radius();
    let n = lam.len();

    if r == 0.0 {
        // The ball is a single point. When β ≠ 0 no finite multiplier
        // certifies it; report 0 for the degenerate constraint.
        return (vec![0.0; n], 0.0);
    }

    // Interior candidate, computed exactly (a null-space direction with
    // βᵢ ≠ 0 makes the unconstrained problem unbounded below: boundary case).
    let mut interior = Vec::with_capacity(n);
    let mut unbounded = false;
    for i in 0..n {
        if lam[i] == 0.0 {
            if beta[i] != 0.0 {
                unbounded = true;
                break;
            }
            interior.push(0.0);
        } else {
            interior.push(beta[i] / (2.0 * lam[i]));
        }
    }
    if !unbounded && norm2(&interior) <= r {
        return (interior, 0.0);
    }

    // φ(μ) = 1/r − 1/‖x(μ)‖ and its derivative −2T/S^{3/2}, where
    // S = Σ βᵢ²/(λᵢ+μ)² (so ‖x(μ)‖ = √S/2) and T = Σ βᵢ²/(λᵢ+μ)³.
    let eval = |mu: f64| -> (f64, f64, f64) {
        let mut s = 0.0f64;
        let mut t = 0.0f64;
        for i in 0..n {
            let b2 = beta[i] * beta[i];
            if b2 == 0.0 {
                continue;
            }
            let denom = lam[i] + mu;
            let q = b2 / (denom * denom);
            s += q;
            t += q / denom;
        }
        let norm = sqrt(s) / 2.0;
        let phi = 1.0 / r - 2.0 / sqrt(s);
        let dphi = -2.0 * t / (s * sqrt(s));
        (norm, phi, dphi)
    };

    // ‖x(μ)‖ ≤ ‖β‖/(2μ), so the root lies in [0, ‖β‖/(2r)]. The boundary
    // path is only reached with β ≠ 0, hence hi > 0.
    let mut lo = 0.0f64;
    let mut hi = norm2(beta) / (2.0 * r);
    let mut mu = hi;
    for _ in 0..200 {
        let (norm, phi, dphi) = eval(mu);
        if abs(norm - r) <= 1e-10 * r {
            break;
        }
        if phi > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        let newton = mu - phi / dphi;
        mu = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi {
            // Bracket exhausted; hi is the feasible endpoint (‖x(hi)‖ ≤ r).
            mu = hi;
            break;
        }
    }

    let x: Vec<f64> = (0..n).map(|i| beta[i] / (2.0 * (lam[i] + mu))).collect();
    (x, mu)
}
