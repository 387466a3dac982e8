//! End-to-end private multi-outcome least squares.
//!
//! The problem: solve l ridge regressions that share one n×d design matrix
//! under a single (ε, δ) budget. The shared-covariance solver spends
//! (ε/2, δ/2) once on the noisy covariance
//!
//! ```text
//!     Î = (1/n)XᵀX + E₁ + λI,        E₁ symmetric Gaussian,
//! ```
//!
//! and (ε/2, δ/2) on the association block V̂ ≈ (1/n)XᵀY, then recovers all
//! l coefficient vectors against one QR factorization:
//!
//! ```text
//!     Î = QR,     R ŵᵢ = Qᵀ v̂ᵢ,     i = 1, …, l.
//! ```
//!
//! Total cost O(nd² + d³ + ld²) — versus O(l·(nd² + d³)) for the naive
//! baseline that runs an independent sufficient-statistics solve per outcome
//! at (ε/(2√l), δ/(2l)) per half. More important than the flops: the
//! covariance noise is paid once and does not grow with l. The association
//! term is released either by the Gaussian mechanism (per-coordinate
//! σ ∝ √l·‖𝒳‖|𝒴|/n from the joint sensitivity) or by the projection
//! mechanism (noise radius ∝ sup_i‖yⁱ‖₂·‖𝒳‖/n, with no √l factor). The
//! subsampled variant estimates the covariance from s of the n rows at the
//! amplification-inflated budget (n/s·ε/2, δ/2), trading statistical error
//! for less injected noise.
//!
//! Randomness discipline (it carries the reproducibility contracts): the
//! shared-covariance solvers draw E₁ from the covariance stream at index 0
//! and the naive baseline draws regression i's E₁ at index i, so the two
//! coincide bitwise at l = 1; association noise is keyed by outcome-column
//! content, making the Gaussian variant equivariant under column
//! permutations of Y; the subsample index set has its own phase, so s = n
//! reproduces the unsubsampled solver bitwise.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{back_substitute_matrix, qr_decompose, QRFactors};
use crate::math::{norm2, sqrt};
use crate::matrix::Matrix;
use crate::privacy::{
    association_sensitivity, calibration_constant, covariance_sensitivity, gaussian_vector_mech,
    subsample_amplified_budget, symmetric_gaussian_noise, PrivacyBudget,
};
use crate::query::{projection_mechanism, true_answers, OutcomeMatrix};
use crate::rng::{column_stream, index_stream, phase, sample_without_replacement, stream};

/// The private n×d design matrix with a declared row ℓ₂ bound ‖𝒳‖.
/// Construction clips: any row with norm above the bound is rescaled onto
/// the sphere, so the sensitivity bounds downstream hold unconditionally.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    x: Matrix,
    x_bound: f64,
}

impl DesignMatrix {
    pub fn new(mut x: Matrix, x_bound: f64) -> Self {
        assert!(x_bound >= 0.0 && x_bound.is_finite(), "x_bound must be finite and nonnegative");
        assert!(x.rows() >= 1 && x.cols() >= 1, "design matrix must be nonempty");
        for i in 0..x.rows() {
            // Loop rather than scale once: rounding can leave the rescaled
            // norm a few ulps above the bound, and the invariant is exact.
            loop {
                let nrm = norm2(x.row(i));
                if nrm <= x_bound {
                    break;
                }
                let scale = x_bound / nrm;
                for v in x.row_mut(i) {
                    *v *= scale;
                }
            }
        }
        Self { x, x_bound }
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn x_bound(&self) -> f64 {
        self.x_bound
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn d(&self) -> usize {
        self.x.cols()
    }
}

/// Association-release mechanism selector. `None` releases the exact
/// association term (non-private reference runs only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    Gauss,
    Projection,
    None,
}

impl Mechanism {
    pub fn label(&self) -> &'static str {
        match self {
            Mechanism::Gauss => "gauss",
            Mechanism::Projection => "projection",
            Mechanism::None => "none",
        }
    }
}

/// Everything a solver run needs besides the data.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Ridge parameter λ ≥ 0.
    pub lambda: f64,
    /// Total (ε, δ) budget for the run; solvers split it internally.
    pub budget: PrivacyBudget,
    pub mechanism: Mechanism,
    /// Covariance subsample size for [`subsample_reuse_cov`]; must be ≤ n.
    pub subsample_s: Option<usize>,
    /// Root seed; all noise streams derive from it.
    pub seed: u64,
}

/// Wall-clock per-phase durations in milliseconds. All zero when the crate
/// is built without `std` (no monotonic clock available).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub covariance_ms: f64,
    pub mechanism_ms: f64,
    pub solve_ms: f64,
}

impl PhaseTimes {
    pub fn total_ms(&self) -> f64 {
        self.covariance_ms + self.mechanism_ms + self.solve_ms
    }
}

#[cfg(feature = "std")]
#[derive(Clone, Copy)]
struct Stopwatch {
    start: std::time::Instant,
}

#[cfg(feature = "std")]
impl Stopwatch {
    fn start() -> Self {
        Self { start: std::time::Instant::now() }
    }

    fn elapsed_ms(&self) -> f64 {
        self.start.elapsed().as_secs_f64() * 1e3
    }
}

#[cfg(not(feature = "std"))]
#[derive(Clone, Copy)]
struct Stopwatch;

#[cfg(not(feature = "std"))]
impl Stopwatch {
    fn start() -> Self {
        Stopwatch
    }

    fn elapsed_ms(&self) -> f64 {
        0.0
    }
}

/// A solver run's output: coefficients plus the metadata needed to audit it.
#[derive(Debug, Clone)]
pub struct PrimoSolution {
    /// d×l coefficient matrix, column i for outcome i. Always finite.
    pub w_hat: Matrix,
    /// Per-entry noise σ applied to the covariance statistic.
    pub sigma_cov: f64,
    /// Gaussian variant: per-coordinate association σ. Projection variant:
    /// the noise radius r. `None` mechanism: 0.
    pub sigma_assoc_or_r: f64,
    pub mechanism: Mechanism,
    pub wall_times: PhaseTimes,
    pub seed: u64,
    /// Instrumentation: how many covariance noise draws the run performed
    /// (1 for the shared-covariance solvers, l for the naive baseline).
    pub cov_noise_draws: usize,
    /// Instrumentation: how many QR factorizations the run performed.
    pub qr_factorizations: usize,
}

fn seal_solution(sol: PrimoSolution) -> PrimoSolution {
    assert!(
        sol.w_hat.data().iter().all(|v| v.is_finite()),
        "solver produced non-finite coefficients"
    );
    sol
}

/// The empirical covariance (1/n)XᵀX: symmetric PSD, O(nd²).
pub fn form_covariance(x: &DesignMatrix) -> Matrix {
    x.x().gram_at_a_scaled(1.0 / x.n() as f64)
}

/// The noisy regularized covariance Î = (1/n)XᵀX + E₁ + λI and its QR
/// factors, with E₁ symmetric Gaussian at σ₁ = c(b_half)·√2‖𝒳‖²/n.
/// Returns (Î, QR, σ₁). Î is not guaranteed PSD — by design the noise is
/// added as drawn, and any resulting singularity surfaces at the solve.
pub fn noisy_covariance<R: RngCore>(
    x: &DesignMatrix,
    lambda: f64,
    b_half: &PrivacyBudget,
    rng: &mut R,
) -> (Matrix, QRFactors, f64) {
    assert!(lambda >= 0.0 && lambda.is_finite(), "lambda must be finite and nonnegative");
    let sigma = calibration_constant(b_half) * covariance_sensitivity(x.x_bound(), x.n()).value();
    let mut i_hat = form_covariance(x);
    i_hat.add_assign(&symmetric_gaussian_noise(x.d(), sigma, rng));
    i_hat.add_scaled_identity(lambda);
    let factors = qr_decompose(&i_hat).expect("covariance matrix is square by construction");
    (i_hat, factors, sigma)
}

fn solve_with_factors(factors: &QRFactors, v_hat: &Matrix) -> Result<Matrix> {
    let qtv = factors.q.matmul_at_b(v_hat);
    back_substitute_matrix(&factors.r, &qtv)
}

/// Non-private ridge (λ > 0) or OLS (λ = 0): column i solves
/// ((1/n)XᵀX + λI) wᵢ = (1/n)Xᵀyᵢ via one QR and per-column back
/// substitution. λ = 0 with a singular covariance is an error.
pub fn ols_ridge_solve(x: &DesignMatrix, y: &OutcomeMatrix, lambda: f64) -> Result<Matrix> {
    assert!(lambda >= 0.0 && lambda.is_finite(), "lambda must be finite and nonnegative");
    if x.n() != y.n() {
        return Err(Error::DimMismatch { context: "ols_ridge_solve: X and Y row counts differ" });
    }
    let mut a = form_covariance(x);
    a.add_scaled_identity(lambda);
    let factors = qr_decompose(&a).expect("covariance matrix is square by construction");
    let g = true_answers(x, y).expect("dimensions checked above");
    solve_with_factors(&factors, &g.to_matrix())
}

/// The unregularized optimum W* for excess-loss comparisons; falls back to a
/// λ = 1e−10 floor when (1/n)XᵀX is numerically singular.
pub fn ols_optimum(x: &DesignMatrix, y: &OutcomeMatrix) -> Result<Matrix> {
    match ols_ridge_solve(x, y, 0.0) {
        Err(Error::SingularSystem { .. }) => ols_ridge_solve(x, y, 1e-10),
        other => other,
    }
}

/// Releases the association block V̂ ≈ (1/n)XᵀY as a d×l matrix, returning
/// (V̂, σ or r). Gauss: per-column Gaussian mechanism with the *joint*
/// sensitivity 2√l‖𝒳‖|𝒴|/n (one individual perturbs all l columns), noise
/// streams keyed by column content. Projection: one dl-dimensional draw plus
/// feasibility projection. None: the exact statistic.
fn association_release(
    x: &DesignMatrix,
    y: &OutcomeMatrix,
    mechanism: Mechanism,
    b_half: &PrivacyBudget,
    seed: u64,
) -> Result<(Matrix, f64)> {
    match mechanism {
        Mechanism::Gauss => {
            let g = true_answers(x, y)?;
            let (d, l) = (x.d(), y.l());
            let sens = association_sensitivity(x.x_bound(), y.y_bound(), l, y.n());
            let sigma = calibration_constant(b_half) * sens.value();
            let mut v_hat = Matrix::zeros(d, l);
            let mut g_col = Vec::with_capacity(d);
            for j in 0..l {
                g_col.clear();
                g_col.extend((0..d).map(|k| g.values()[k * l + j]));
                let mut rng = column_stream(seed, phase::ASSOCIATION, &y.y().col_copy(j));
                let (noised, spec) = gaussian_vector_mech(&g_col, &sens, b_half, &mut rng);
                debug_assert_eq!(spec.sigma, sigma);
                for (k, &v) in noised.iter().enumerate() {
                    v_hat.set(k, j, v);
                }
            }
            Ok((v_hat, sigma))
        }
        Mechanism::Projection => {
            let mut rng = stream(seed, phase::PROJECTION, b"");
            let (answers, noise) = projection_mechanism(x, y, b_half, &mut rng);
            Ok((answers.to_matrix(), noise.sigma))
        }
        Mechanism::None => {
            let g = true_answers(x, y)?;
            Ok((g.to_matrix(), 0.0))
        }
    }
}

/// The shared-covariance solver: one noisy covariance + QR at (ε/2, δ/2),
/// one association release at (ε/2, δ/2), l back substitutions. The
/// covariance work is independent of l — that is the entire point.
pub fn reuse_cov(x: &DesignMatrix, y: &OutcomeMatrix, cfg: &SolverConfig) -> Result<PrimoSolution> {
    assert!(
        cfg.mechanism != Mechanism::None,
        "reuse_cov requires a private association mechanism"
    );
    if x.n() != y.n() {
        return Err(Error::DimMismatch { context: "reuse_cov: X and Y row counts differ" });
    }
    let half = cfg.budget.halved();

    let sw = Stopwatch::start();
    let mut cov_rng = index_stream(cfg.seed, phase::COVARIANCE, 0);
    let (_i_hat, factors, sigma_cov) = noisy_covariance(x, cfg.lambda, &half, &mut cov_rng);
    let covariance_ms = sw.elapsed_ms();

    let sw = Stopwatch::start();
    let (v_hat, sigma_assoc_or_r) = association_release(x, y, cfg.mechanism, &half, cfg.seed)?;
    let mechanism_ms = sw.elapsed_ms();

    let sw = Stopwatch::start();
    let w_hat = solve_with_factors(&factors, &v_hat)?;
    let solve_ms = sw.elapsed_ms();

    Ok(seal_solution(PrimoSolution {
        w_hat,
        sigma_cov,
        sigma_assoc_or_r,
        mechanism: cfg.mechanism,
        wall_times: PhaseTimes { covariance_ms, mechanism_ms, solve_ms },
        seed: cfg.seed,
        cov_noise_draws: 1,
        qr_factorizations: 1,
    }))
}

/// The subsampled shared-covariance solver: the covariance is estimated from
/// a secret uniform without-replacement sample of s rows at the
/// amplification-inflated budget (n/s·ε/2, δ/2) — so σ₁ = c(·)·√2‖𝒳‖²/s —
/// while the association term still uses all n rows at (ε/2, δ/2).
/// s = n reproduces [`reuse_cov`] bitwise.
pub fn subsample_reuse_cov(
    x: &DesignMatrix,
    y: &OutcomeMatrix,
    cfg: &SolverConfig,
) -> Result<PrimoSolution> {
    assert!(
        cfg.mechanism != Mechanism::None,
        "subsample_reuse_cov requires a private association mechanism"
    );
    if x.n() != y.n() {
        return Err(Error::DimMismatch {
            context: "subsample_reuse_cov: X and Y row counts differ",
        });
    }
    let s = cfg.subsample_s.expect("subsample_reuse_cov requires cfg.subsample_s");
    let amplified = subsample_amplified_budget(&cfg.budget, x.n(), s)?;
    let half = cfg.budget.halved();

    let sw = Stopwatch::start();
    let mut sub_rng = stream(cfg.seed, phase::SUBSAMPLE, b"");
    let indices = sample_without_replacement(&mut sub_rng, x.n(), s);
    let x_s = DesignMatrix::new(
        Matrix::from_fn(s, x.d(), |r, c| x.x().get(indices[r], c)),
        x.x_bound(),
    );
    let mut cov_rng = index_stream(cfg.seed, phase::COVARIANCE, 0);
    let (_i_hat, factors, sigma_cov) = noisy_covariance(&x_s, cfg.lambda, &amplified, &mut cov_rng);
    let covariance_ms = sw.elapsed_ms();

    let sw = Stopwatch::start();
    let (v_hat, sigma_assoc_or_r) = association_release(x, y, cfg.mechanism, &half, cfg.seed)?;
    let mechanism_ms = sw.elapsed_ms();

    let sw = Stopwatch::start();
    let w_hat = solve_with_factors(&factors, &v_hat)?;
    let solve_ms = sw.elapsed_ms();

    Ok(seal_solution(PrimoSolution {
        w_hat,
        sigma_cov,
        sigma_assoc_or_r,
        mechanism: cfg.mechanism,
        wall_times: PhaseTimes { covariance_ms, mechanism_ms, solve_ms },
        seed: cfg.seed,
        cov_noise_draws: 1,
        qr_factorizations: 1,
    }))
}

/// The naive baseline: l independent sufficient-statistics solves, each with
/// its own covariance noise draw and QR, each at (ε/(2√l), δ/(2l)) per half
/// so the whole run composes to (ε, δ). Noise scales like √l per regression —
/// the penalty the shared-covariance solvers exist to avoid.
pub fn naive_ssp_baseline(
    x: &DesignMatrix,
    y: &OutcomeMatrix,
    lambda: f64,
    b: &PrivacyBudget,
    seed: u64,
) -> Result<PrimoSolution> {
    if x.n() != y.n() {
        return Err(Error::DimMismatch {
            context: "naive_ssp_baseline: X and Y row counts differ",
        });
    }
    let l = y.l();
    assert!(l >= 1, "naive baseline needs at least one outcome");
    let per_half =
        PrivacyBudget::new(b.epsilon() / (2.0 * sqrt(l as f64)), b.delta() / (2.0 * l as f64));

    let (d, n) = (x.d(), x.n());
    let mut w_hat = Matrix::zeros(d, l);
    let mut sigma_cov = 0.0;
    let mut sigma_assoc = 0.0;
    let mut wall_times = PhaseTimes::default();
    for i in 0..l {
        let sw = Stopwatch::start();
        let mut cov_rng = index_stream(seed, phase::COVARIANCE, i as u64);
        let (_i_hat, factors, s_cov) = noisy_covariance(x, lambda, &per_half, &mut cov_rng);
        wall_times.covariance_ms += sw.elapsed_ms();
        sigma_cov = s_cov;

        let sw = Stopwatch::start();
        let y_i = OutcomeMatrix::new(Matrix::new(n, 1, y.y().col_copy(i)), y.y_bound());
        let (v_i, s_assoc) = association_release(x, &y_i, Mechanism::Gauss, &per_half, seed)?;
        wall_times.mechanism_ms += sw.elapsed_ms();
        sigma_assoc = s_assoc;

        let sw = Stopwatch::start();
        let w_i = solve_with_factors(&factors, &v_i)?;
        wall_times.solve_ms += sw.elapsed_ms();
        for k in 0..d {
            w_hat.set(k, i, w_i.get(k, 0));
        }
    }

    Ok(seal_solution(PrimoSolution {
        w_hat,
        sigma_cov,
        sigma_assoc_or_r: sigma_assoc,
        mechanism: Mechanism::Gauss,
        wall_times,
        seed,
        cov_noise_draws: l,
        qr_factorizations: l,
    }))
}

/// ‖XW − Y‖²_F, the total squared residual across all outcomes.
pub fn residual_frob_sq(x: &DesignMatrix, y: &OutcomeMatrix, w: &Matrix) -> f64 {
    assert_eq!(w.rows(), x.d(), "residual: W row count must equal d");
    assert_eq!(w.cols(), y.l(), "residual: W column count must equal l");
    assert_eq!(x.n(), y.n(), "residual: X and Y row counts differ");
    let xw = x.x().matmul(w);
    xw.data()
        .iter()
        .zip(y.y().data())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum()
}

/// The excess loss (1/nl)(‖XŴ − Y‖²_F − ‖XW*‖-residual): 0 exactly when
/// Ŵ = W*, and (1/nl)‖X(Ŵ−W*)‖²_F in the realizable case Y = XW*.
pub fn excess_loss(x: &DesignMatrix, y: &OutcomeMatrix, w_hat: &Matrix, w_star: &Matrix) -> f64 {
    let nl = (x.n() * y.l()) as f64;
    (residual_frob_sq(x, y, w_hat) - residual_frob_sq(x, y, w_star)) / nl
}

/// The squared-loss ratio ‖XŴ − Y‖²_F / ‖XW* − Y‖²_F (≥ 1 when W* is the
/// optimum and the denominator is nonzero).
pub fn loss_ratio(x: &DesignMatrix, y: &OutcomeMatrix, w_hat: &Matrix, w_star: &Matrix) -> f64 {
    residual_frob_sq(x, y, w_hat) / residual_frob_sq(x, y, w_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::fill_standard_normal;
    use alloc::vec;
    use alloc::vec::Vec;

    fn random_matrix(rows: usize, cols: usize, seed: u64, tag: &[u8]) -> Matrix {
        let mut rng = stream(seed, 95, tag);
        let mut data = vec![0.0; rows * cols];
        fill_standard_normal(&mut rng, &mut data);
        Matrix::new(rows, cols, data)
    }

    fn random_design(n: usize, d: usize, seed: u64) -> DesignMatrix {
        let x = random_matrix(n, d, seed, b"solver-x");
        let bound = (0..n).map(|i| norm2(x.row(i))).fold(0.0f64, f64::max);
        DesignMatrix::new(x, bound)
    }

    fn random_outcomes(n: usize, l: usize, seed: u64) -> OutcomeMatrix {
        let y = random_matrix(n, l, seed, b"solver-y");
        let bound = y.max_abs();
        OutcomeMatrix::new(y, bound)
    }

    fn budget(eps: f64, delta: f64) -> PrivacyBudget {
        PrivacyBudget::new(eps, delta)
    }

    fn config(lambda: f64, eps: f64, mechanism: Mechanism, seed: u64) -> SolverConfig {
        SolverConfig { lambda, budget: budget(eps, 1e-4), mechanism, subsample_s: None, seed }
    }

    fn rel_frob_distance(a: &Matrix, b: &Matrix) -> f64 {
        let mut diff = a.clone();
        let mut neg = b.clone();
        for v in neg.data_mut() {
            *v = -*v;
        }
        diff.add_assign(&neg);
        diff.frob_norm() / b.frob_norm().max(1e-300)
    }

    #[test]
    fn clipping_rescales_oversized_rows_exactly() {
        let x = Matrix::new(3, 2, vec![3.0, 4.0, 0.3, 0.4, 0.0, 0.0]);
        let clipped = DesignMatrix::new(x, 1.0);
        assert!((norm2(clipped.x().row(0)) - 1.0).abs() < 1e-15);
        assert!(norm2(clipped.x().row(0)) <= 1.0, "invariant is one-sided exact");
        // Rows already inside the ball are untouched bitwise.
        assert_eq!(clipped.x().row(1), &[0.3, 0.4]);
        assert_eq!(clipped.x().row(2), &[0.0, 0.0]);
    }

    #[test]
    fn clipping_with_zero_bound_zeroes_rows() {
        let x = Matrix::new(2, 2, vec![1.0, 2.0, -3.0, 4.0]);
        let clipped = DesignMatrix::new(x, 0.0);
        assert!(clipped.x().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn covariance_of_identity_design() {
        let x = DesignMatrix::new(Matrix::identity(2), 1.0);
        let c = form_covariance(&x);
        assert_eq!(c.data(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn covariance_of_all_ones() {
        // X = ones(4×3), row norm √3: (1/4)XᵀX = (1/4)·4·ones = ones(3×3).
        let x = DesignMatrix::new(Matrix::from_fn(4, 3, |_, _| 1.0), 2.0);
        let c = form_covariance(&x);
        assert!(c.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn ols_identity_design_returns_outcomes() {
        // n = d = 4 (power of two, so the 1/n and back-substitution scalings
        // are exact): X = I → Ŵ = Y bitwise.
        let y = random_outcomes(4, 3, 1);
        let x = DesignMatrix::new(Matrix::identity(4), 1.0);
        let w = ols_ridge_solve(&x, &y, 0.0).unwrap();
        assert_eq!(w.data(), y.y().data());
    }

    #[test]
    fn ridge_shrinks_towards_zero() {
        let x = random_design(40, 5, 2);
        let y = random_outcomes(40, 3, 3);
        let w = ols_ridge_solve(&x, &y, 1e6).unwrap();
        assert!(w.frob_norm() < 1e-4, "‖Ŵ‖_F = {}", w.frob_norm());
    }

    #[test]
    fn ols_surfaces_singularity() {
        // Duplicate column → rank-deficient covariance at λ = 0.
        let x = DesignMatrix::new(Matrix::new(3, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]), 10.0);
        let y = random_outcomes(3, 1, 4);
        assert!(matches!(ols_ridge_solve(&x, &y, 0.0), Err(Error::SingularSystem { .. })));
        // ols_optimum's λ floor recovers a finite solution.
        let w = ols_optimum(&x, &y).unwrap();
        assert!(w.data().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn noisy_covariance_zero_signal_is_ridge_identity() {
        let x = DesignMatrix::new(Matrix::new(3, 2, vec![1.0; 6]), 0.0);
        let mut rng = index_stream(9, phase::COVARIANCE, 0);
        let (i_hat, _, sigma) = noisy_covariance(&x, 0.7, &budget(1.0, 0.1), &mut rng);
        assert_eq!(sigma, 0.0);
        assert_eq!(i_hat.data(), &[0.7, 0.0, 0.0, 0.7]);
    }

    #[test]
    fn noisy_covariance_huge_epsilon_is_nearly_exact() {
        // Unit row bound and n = 1000 put σ₁ ≈ 6e−8; a 10-entry draw stays
        // far inside the 1e−6 window.
        let x = DesignMatrix::new(random_matrix(1000, 4, 5, b"solver-x"), 1.0);
        let mut rng = index_stream(10, phase::COVARIANCE, 0);
        let (i_hat, _, _) = noisy_covariance(&x, 1.0, &budget(1e9, 0.5), &mut rng);
        let mut want = form_covariance(&x);
        want.add_scaled_identity(1.0);
        let mut diff = i_hat.clone();
        for (a, b) in diff.data_mut().iter_mut().zip(want.data()) {
            *a -= b;
        }
        assert!(diff.max_abs() < 1e-6, "max deviation {}", diff.max_abs());
    }

    #[test]
    fn noisy_covariance_is_reproducible() {
        let x = random_design(20, 3, 6);
        let mut r1 = index_stream(11, phase::COVARIANCE, 0);
        let mut r2 = index_stream(11, phase::COVARIANCE, 0);
        let (a, _, _) = noisy_covariance(&x, 0.1, &budget(2.0, 0.01), &mut r1);
        let (b, _, _) = noisy_covariance(&x, 0.1, &budget(2.0, 0.01), &mut r2);
        assert_eq!(a.data(), b.data());
    }

    #[test]
    fn reuse_cov_recovers_ridge_in_the_no_noise_limit() {
        let x = random_design(50, 5, 7);
        let y = random_outcomes(50, 3, 8);
        let want = ols_ridge_solve(&x, &y, 0.5).unwrap();
        for mechanism in [Mechanism::Gauss, Mechanism::Projection] {
            let cfg = SolverConfig {
                lambda: 0.5,
                budget: budget(1e9, 1e-9),
                mechanism,
                subsample_s: None,
                seed: 12,
            };
            let sol = reuse_cov(&x, &y, &cfg).unwrap();
            let rel = rel_frob_distance(&sol.w_hat, &want);
            assert!(rel < 1e-3, "{mechanism:?}: relative error {rel}");
        }
    }

    #[test]
    fn reuse_cov_single_outcome_matches_naive_bitwise() {
        let x = random_design(30, 4, 13);
        let y = random_outcomes(30, 1, 14);
        let cfg = config(0.3, 2.0, Mechanism::Gauss, 77);
        let shared = reuse_cov(&x, &y, &cfg).unwrap();
        let naive = naive_ssp_baseline(&x, &y, 0.3, &cfg.budget, 77).unwrap();
        assert_eq!(shared.w_hat.data(), naive.w_hat.data());
        assert_eq!(shared.sigma_cov, naive.sigma_cov);
        assert_eq!(shared.sigma_assoc_or_r, naive.sigma_assoc_or_r);
    }

    #[test]
    fn subsample_at_full_size_matches_reuse_cov_bitwise() {
        let x = random_design(25, 3, 15);
        let y = random_outcomes(25, 4, 16);
        for mechanism in [Mechanism::Gauss, Mechanism::Projection] {
            let mut cfg = config(0.4, 3.0, mechanism, 99);
            let base = reuse_cov(&x, &y, &cfg).unwrap();
            cfg.subsample_s = Some(25);
            let sub = subsample_reuse_cov(&x, &y, &cfg).unwrap();
            assert_eq!(base.w_hat.data(), sub.w_hat.data(), "{mechanism:?}");
            assert_eq!(base.sigma_cov, sub.sigma_cov);
            assert_eq!(base.sigma_assoc_or_r, sub.sigma_assoc_or_r);
        }
    }

    #[test]
    fn subsample_rejects_out_of_range_sizes() {
        let x = random_design(10, 2, 17);
        let y = random_outcomes(10, 2, 18);
        for bad in [0usize, 11] {
            let mut cfg = config(0.5, 1.0, Mechanism::Gauss, 1);
            cfg.subsample_s = Some(bad);
            assert!(matches!(
                subsample_reuse_cov(&x, &y, &cfg),
                Err(Error::SubsampleOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn subsample_of_one_row_still_returns_finite_coefficients() {
        let x = random_design(12, 3, 19);
        let y = random_outcomes(12, 2, 20);
        let mut cfg = config(1.0, 1.0, Mechanism::Gauss, 2);
        cfg.subsample_s = Some(1);
        let sol = subsample_reuse_cov(&x, &y, &cfg).unwrap();
        assert!(sol.w_hat.data().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn naive_baseline_recovers_ridge_in_the_no_noise_limit() {
        let x = random_design(40, 4, 21);
        let y = random_outcomes(40, 3, 22);
        let want = ols_ridge_solve(&x, &y, 0.2).unwrap();
        let sol = naive_ssp_baseline(&x, &y, 0.2, &budget(1e9, 1e-9), 5).unwrap();
        let rel = rel_frob_distance(&sol.w_hat, &want);
        assert!(rel < 1e-3, "relative error {rel}");
    }

    #[test]
    fn zero_outcomes_projection_collapses_to_zero() {
        let x = random_design(15, 3, 23);
        let y = OutcomeMatrix::new(Matrix::zeros(15, 2), 0.0);
        let cfg = config(0.5, 1.0, Mechanism::Projection, 3);
        let sol = reuse_cov(&x, &y, &cfg).unwrap();
        assert_eq!(sol.sigma_assoc_or_r, 0.0);
        assert!(sol.w_hat.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gauss_variant_is_equivariant_under_column_permutation() {
        let x = random_design(20, 3, 24);
        let y = random_outcomes(20, 4, 25);
        let reversed = OutcomeMatrix::new(
            Matrix::from_fn(20, 4, |i, j| y.y().get(i, 3 - j)),
            y.y_bound(),
        );
        let cfg = config(0.3, 2.0, Mechanism::Gauss, 31);
        let a = reuse_cov(&x, &y, &cfg).unwrap();
        let b = reuse_cov(&x, &reversed, &cfg).unwrap();
        for j in 0..4 {
            let col_a: Vec<f64> = a.w_hat.col_copy(j);
            let col_b: Vec<f64> = b.w_hat.col_copy(3 - j);
            assert_eq!(col_a, col_b, "column {j} must move with its outcome");
        }
    }

    #[test]
    fn instrumentation_counts_shared_work_once() {
        let x = random_design(18, 3, 26);
        let y = random_outcomes(18, 5, 27);
        let cfg = config(0.2, 1.5, Mechanism::Gauss, 41);
        let shared = reuse_cov(&x, &y, &cfg).unwrap();
        assert_eq!(shared.cov_noise_draws, 1);
        assert_eq!(shared.qr_factorizations, 1);
        let naive = naive_ssp_baseline(&x, &y, 0.2, &cfg.budget, 41).unwrap();
        assert_eq!(naive.cov_noise_draws, 5);
        assert_eq!(naive.qr_factorizations, 5);
    }

    #[test]
    fn solvers_reject_mismatched_row_counts() {
        let x = random_design(10, 2, 28);
        let y = random_outcomes(11, 2, 29);
        let cfg = config(0.1, 1.0, Mechanism::Gauss, 6);
        assert!(matches!(reuse_cov(&x, &y, &cfg), Err(Error::DimMismatch { .. })));
        assert!(matches!(
            naive_ssp_baseline(&x, &y, 0.1, &cfg.budget, 6),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn excess_loss_vanishes_at_the_optimum() {
        let x = random_design(30, 4, 30);
        let y = random_outcomes(30, 2, 31);
        let w_star = ols_optimum(&x, &y).unwrap();
        assert_eq!(excess_loss(&x, &y, &w_star, &w_star), 0.0);
        assert_eq!(loss_ratio(&x, &y, &w_star, &w_star), 1.0);
    }

    #[test]
    fn excess_loss_in_the_realizable_case_is_a_pure_quadratic() {
        // Y = XW* exactly → excess(Ŵ) = (1/nl)‖X(Ŵ−W*)‖²_F.
        let x = random_design(20, 3, 32);
        let w_star = random_matrix(3, 2, 33, b"wstar");
        let y_mat = x.x().matmul(&w_star);
        let y = OutcomeMatrix::new(y_mat.clone(), y_mat.max_abs());
        let delta = random_matrix(3, 2, 34, b"delta");
        let mut w_hat = w_star.clone();
        w_hat.add_assign(&delta);
        let got = excess_loss(&x, &y, &w_hat, &w_star);
        let want = x.x().matmul(&delta).frob_norm().powi(2) / (20.0 * 2.0);
        assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn excess_loss_is_nonnegative_at_noisy_solutions() {
        let x = random_design(40, 5, 35);
        let y = random_outcomes(40, 3, 36);
        let w_star = ols_optimum(&x, &y).unwrap();
        let cfg = config(0.3, 1.0, Mechanism::Gauss, 51);
        let sol = reuse_cov(&x, &y, &cfg).unwrap();
        assert!(excess_loss(&x, &y, &sol.w_hat, &w_star) >= 0.0);
        assert!(loss_ratio(&x, &y, &sol.w_hat, &w_star) >= 1.0);
    }
}
