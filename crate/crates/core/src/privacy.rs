//! Privacy accounting and Gaussian noise generation.
//!
//! Everything here is built around the Gaussian mechanism: releasing
//! `f(X) + N(0, σ²I)` with `σ = c(ε, δ) · Δ₂(f)` is (ε, δ)-differentially
//! private under replace-one adjacency, where
//!
//! ```text
//!     c(ε, δ) = √(2 (1/ε + ln(1/δ)/ε²))
//! ```
//!
//! and `Δ₂(f)` is the worst-case ℓ₂ change of `f` when one individual's row
//! is replaced. The calibration constant is valid for every ε > 0 (it is not
//! the classical ε ≤ 1 form). The two sensitivity bounds exported here cover
//! the sufficient statistics of least squares on an n-row design matrix with
//! row norms ≤ ‖𝒳‖ and outcomes bounded by |𝒴|:
//!
//! - covariance `(1/n)XᵀX`: replacing row x by x′ changes the statistic by
//!   `(x x ᵀ − x′x′ᵀ)/n`, whose Frobenius norm is maximized at orthogonal
//!   rows of full norm, giving `√2‖𝒳‖²/n` (the √2 is attained, and brute
//!   force sweeps do observe deviations above `‖𝒳‖²/n`, so the smaller
//!   constant would under-provision noise);
//! - association `(1/n)XᵀY` across l outcomes: `2√l‖𝒳‖|𝒴|/n`, the factor 2
//!   again from replace-one adjacency.
//!
//! Budgets compose additively (basic composition); the solvers split
//! (ε, δ) into halves for the two statistics via [`PrivacyBudget::halved`].
//! Subsampling amplification is arithmetic only: a mechanism run on a secret
//! uniform subsample of s of n rows may spend the inflated budget
//! `(n/s · ε/2, δ/2)` for an amplified cost of roughly `(ε/2, δ/2)`.
//!
//! Noise quality caveat: samples come from a seeded ChaCha stream through a
//! Box–Muller transform over f64. This is reproducible and statistically
//! sound for experimentation, but it is **not** hardened against
//! floating-point attacks on DP noise (snapping, discrete Gaussians); do not
//! deploy these mechanisms against adversarial consumers of the output.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::math::{ln, sqrt};
use crate::matrix::Matrix;
use crate::rng::standard_normal;

/// An (ε, δ) differential-privacy budget: ε > 0, 0 < δ < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Self {
        assert!(epsilon > 0.0 && epsilon.is_finite(), "privacy budget: epsilon must be positive");
        assert!(delta > 0.0 && delta < 1.0, "privacy budget: delta must lie in (0, 1)");
        Self { epsilon, delta }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The per-statistic share under a 50/50 basic-composition split.
    pub fn halved(&self) -> Self {
        Self { epsilon: self.epsilon / 2.0, delta: self.delta / 2.0 }
    }
}

/// Worst-case ℓ₂ sensitivity of a released statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityBound {
    l2_sensitivity: f64,
}

impl SensitivityBound {
    pub fn new(l2_sensitivity: f64) -> Self {
        assert!(
            l2_sensitivity >= 0.0 && l2_sensitivity.is_finite(),
            "sensitivity must be finite and nonnegative"
        );
        Self { l2_sensitivity }
    }

    pub fn value(&self) -> f64 {
        self.l2_sensitivity
    }
}

/// Per-coordinate noise standard deviation actually applied by a mechanism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
}

/// The Gaussian-mechanism calibration constant c(ε, δ) = √(2(1/ε + ln(1/δ)/ε²)),
/// strictly decreasing in both arguments and valid for all ε > 0.
pub fn calibration_constant(b: &PrivacyBudget) -> f64 {
    let eps = b.epsilon();
    sqrt(2.0 * (1.0 / eps + ln(1.0 / b.delta()) / (eps * eps)))
}

/// Adds i.i.d. N(0, σ²) noise per coordinate with σ = c(ε, δ)·Δ₂.
/// Returns the noised vector and the σ used. Zero sensitivity returns the
/// input bitwise (σ = 0).
pub fn gaussian_vector_mech<R: RngCore>(
    value: &[f64],
    sens: &SensitivityBound,
    b: &PrivacyBudget,
    rng: &mut R,
) -> (Vec<f64>, NoiseSpec) {
    let sigma = calibration_constant(b) * sens.value();
    let noised = value.iter().map(|&v| v + sigma * standard_normal(rng)).collect();
    (noised, NoiseSpec { sigma })
}

/// Symmetric d×d Gaussian noise: the d(d+1)/2 upper-triangular entries
/// (diagonal included) are i.i.d. N(0, σ²), mirrored below. Entries are
/// drawn row-major over the upper triangle, so the draw order is part of the
/// reproducibility contract.
pub fn symmetric_gaussian_noise<R: RngCore>(d: usize, sigma: f64, rng: &mut R) -> Matrix {
    assert!(d >= 1, "noise matrix needs d >= 1");
    assert!(sigma >= 0.0 && sigma.is_finite(), "sigma must be finite and nonnegative");
    let mut e = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let z = sigma * standard_normal(rng);
            e.set(i, j, z);
            e.set(j, i, z);
        }
    }
    e
}

/// ℓ₂ sensitivity of the covariance statistic (1/n)XᵀX under replace-one
/// adjacency with row norms ≤ x_bound: √2·x_bound²/n, attained by replacing
/// a full-norm row with an orthogonal one.
pub fn covariance_sensitivity(x_bound: f64, n: usize) -> SensitivityBound {
    assert!(x_bound >= 0.0, "x_bound must be nonnegative");
    assert!(n >= 1, "n must be at least 1");
    SensitivityBound::new(core::f64::consts::SQRT_2 * x_bound * x_bound / n as f64)
}

/// ℓ₂ sensitivity of the association statistic (1/n)XᵀY across l outcomes
/// with |y| ≤ y_bound: 2√l·x_bound·y_bound/n.
pub fn association_sensitivity(x_bound: f64, y_bound: f64, l: usize, n: usize) -> SensitivityBound {
    assert!(x_bound >= 0.0 && y_bound >= 0.0, "bounds must be nonnegative");
    assert!(n >= 1, "n must be at least 1");
    SensitivityBound::new(2.0 * sqrt(l as f64) * x_bound * y_bound / n as f64)
}

/// Budget to spend on a mechanism that only sees a secret uniform
/// without-replacement subsample of s of the n rows: (n/s · ε/2, δ/2).
/// Amplification by subsampling brings the effective cost back to roughly
/// (ε/2, δ/2). s = n degenerates to the plain half split.
pub fn subsample_amplified_budget(b: &PrivacyBudget, n: usize, s: usize) -> Result<PrivacyBudget> {
    if s == 0 || s > n {
        return Err(Error::SubsampleOutOfRange { s, n });
    }
    Ok(PrivacyBudget::new(n as f64 / s as f64 * b.epsilon() / 2.0, b.delta() / 2.0))
}
