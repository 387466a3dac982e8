//! Inner-product query release: the implicit operator `C = I_d ⊗ (1/n)Yᵀ`,
//! its spectrum, and the projection mechanism.
//!
//! The association statistic `(1/n)XᵀY` is exactly the answer vector of the
//! d·l inner-product queries `q_{(k, y_j)}(X) = (1/n)Σᵢ X_{ik} y_{ij}`, which
//! factor through the block-diagonal operator `C`: stacking `vec(X)`
//! column-block-wise, `C·vec(X) = vec((1/n)XᵀY)`. Because `Y` is public, the
//! spectrum of `CᵀC` is available for free from the thin SVD `Yᵀ = LΣVᵀ`:
//!
//! ```text
//!     CᵀC = (I_d ⊗ V) (I_d ⊗ Σ²/n²) (I_d ⊗ Vᵀ),
//! ```
//!
//! i.e. each squared singular value σⱼ²/n² appears with multiplicity d. The
//! projection mechanism noises the true answers with an i.i.d. Gaussian of
//! radius calibrated to the query sensitivity, then projects back onto the
//! feasible set `K = C · {‖x‖₂ ≤ √n‖𝒳‖}` — the answers attainable by *some*
//! bounded design matrix. The projection is a trust-region subproblem in the
//! eigenbasis above and never materializes `C` (which would be (dl)×(dn));
//! every transform runs block-wise against `Y`, `L`, and `Σ`.
//!
//! Layout: answer vectors store query (k, j) at index `k·l + j` — the
//! row-major flattening of the d×l association matrix — so block k of the
//! vector is the length-l slice for design column k.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, trust_region_solve, TrustRegionProblem};
use crate::math::{abs, axpy, dot, norm2, sqrt};
use crate::matrix::Matrix;
use crate::privacy::{calibration_constant, NoiseSpec, PrivacyBudget};
use crate::rng::fill_standard_normal;
use crate::solver::DesignMatrix;

/// The public n×l outcome matrix with its declared entry bound and
/// precomputed per-individual row norms (row i holds individual i's l
/// outcomes).
#[derive(Debug, Clone)]
pub struct OutcomeMatrix {
    y: Matrix,
    y_bound: f64,
    row_norms: Vec<f64>,
    max_row_norm: f64,
}

impl OutcomeMatrix {
    /// Panics if any entry exceeds `y_bound` in magnitude; outcome data is
    /// public, so the bound is a declaration about it, not a clip.
    pub fn new(y: Matrix, y_bound: f64) -> Self {
        assert!(y_bound >= 0.0 && y_bound.is_finite(), "y_bound must be finite and nonnegative");
        assert!(
            y.data().iter().all(|&v| abs(v) <= y_bound),
            "outcome matrix entries must satisfy |y_ij| <= y_bound"
        );
        let row_norms: Vec<f64> = (0..y.rows()).map(|i| norm2(y.row(i))).collect();
        let max_row_norm = row_norms.iter().fold(0.0f64, |a, &b| a.max(b));
        Self { y, y_bound, row_norms, max_row_norm }
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn y_bound(&self) -> f64 {
        self.y_bound
    }

    pub fn row_norms(&self) -> &[f64] {
        &self.row_norms
    }

    /// sup over individuals i of ‖yⁱ‖₂ — the data-dependent (and public)
    /// factor in the projection mechanism's noise radius.
    pub fn max_row_norm(&self) -> f64 {
        self.max_row_norm
    }

    pub fn n(&self) -> usize {
        self.y.rows()
    }

    pub fn l(&self) -> usize {
        self.y.cols()
    }
}

/// Implicit spectral decomposition of `CᵀC` for `C = I_d ⊗ (1/n)Yᵀ`,
/// carried by the eigendecomposition `YᵀY = LΣ²Lᵀ` of the l×l Gram matrix —
/// O(nl²/2 + l³) instead of the O(nl²) bidiagonalization with an O(nlk)
/// n-side accumulation that a thin SVD of Y would spend; everything the
/// projection needs lives on the l side. Holds its own copy of `Y` so
/// operator applications are exact rather than low-rank reconstructions.
#[derive(Debug, Clone)]
pub struct KroneckerSpectrum {
    d: usize,
    n: usize,
    l: usize,
    y: Matrix,
    /// Left singular vectors of Yᵀ, l×k: the eigenvectors of YᵀY.
    left: Matrix,
    /// Singular values of Y, length k, nonincreasing.
    singular_values: Vec<f64>,
    sq_singular_over_n2: Vec<f64>,
}

impl KroneckerSpectrum {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// k = min(n, l), the number of retained singular directions per block.
    pub fn k(&self) -> usize {
        self.sq_singular_over_n2.len()
    }

    /// Left singular vectors of Yᵀ (l×k), the eigenvectors of YᵀY.
    pub fn left(&self) -> &Matrix {
        &self.left
    }

    /// Singular values of Y (length k, nonincreasing).
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Right singular vectors of Yᵀ (n×k), materialized on demand as
    /// vⱼ = Y·lⱼ/σⱼ (zero columns where σⱼ = 0); `I_d ⊗ v` spans the row
    /// space of C. O(nlk) — diagnostics and cross-checks only, the solvers
    /// never need the n side.
    pub fn n_basis(&self) -> Matrix {
        let k = self.k();
        let mut v = Matrix::zeros(self.n, k);
        for j in 0..k {
            let sj = self.singular_values[j];
            if sj > 0.0 {
                for i in 0..self.n {
                    let yl = (0..self.l).map(|c| self.y.get(i, c) * self.left.get(c, j));
                    v.set(i, j, yl.sum::<f64>() / sj);
                }
            }
        }
        v
    }

    /// λⱼ = σⱼ²/n², nonincreasing: the distinct eigenvalues of CᵀC, each with
    /// multiplicity d (plus zeros when k < n).
    pub fn sq_singular_over_n2(&self) -> &[f64] {
        &self.sq_singular_over_n2
    }
}

/// Private answers to the d·l inner-product queries, entry (k, j) at index
/// k·l + j (the row-major d×l flattening).
#[derive(Debug, Clone, PartialEq)]
pub struct QueryAnswerVector {
    d: usize,
    l: usize,
    values: Vec<f64>,
}

impl QueryAnswerVector {
    pub fn new(d: usize, l: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), d * l, "query answer vector must have length d*l");
        assert!(values.iter().all(|v| v.is_finite()), "query answers must be finite");
        Self { d, l, values }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The d×l association matrix this vector flattens.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::new(self.d, self.l, self.values.clone())
    }
}

/// One inner-product query: `(1/n) Σᵢ X_{ik} y_i`. The column index is
/// checked; mismatched vector lengths are a caller bug.
pub fn inner_product_query(x: &DesignMatrix, k: usize, y_col: &[f64]) -> Result<f64> {
    let d = x.d();
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, bound: d });
    }
    let m = x.x();
    assert_eq!(y_col.len(), m.rows(), "inner_product_query: y length must equal n");
    let mut s = 0.0;
    for i in 0..m.rows() {
        s += m.get(i, k) * y_col[i];
    }
    Ok(s / m.rows() as f64)
}

/// All d·l query answers at once: vec((1/n)XᵀY) in the k·l + j layout.
pub fn true_answers(x: &DesignMatrix, y: &OutcomeMatrix) -> Result<QueryAnswerVector> {
    if x.n() != y.n() {
        return Err(Error::DimMismatch { context: "true_answers: X and Y row counts differ" });
    }
    let mut a = x.x().matmul_at_b(y.y());
    let inv_n = 1.0 / x.n() as f64;
    for v in a.data_mut().iter_mut() {
        *v *= inv_n;
    }
    let (d, l) = (a.rows(), a.cols());
    Ok(QueryAnswerVector::new(d, l, a.data().to_vec()))
}

/// Spectrum of `CᵀC` from one symmetric eigenproblem on the smaller-side
/// Gram of `Y` — O(nl·min(n,l) + min(n,l)³), never materializing the
/// (dl)×(dn) operator.
pub fn kron_spectrum(y: &OutcomeMatrix, d: usize) -> KroneckerSpectrum {
    assert!(d >= 1, "kron_spectrum: d must be at least 1");
    let n = y.n();
    let l = y.l();
    let k = n.min(l);
    let n2 = (n as f64) * (n as f64);

    // One symmetric eigenproblem on the smaller Gram matrix carries the
    // whole spectrum: YᵀY = LΣ²Lᵀ directly when l ≤ n, else YYᵀ = VΣ²Vᵀ
    // with the l-side factor recovered as L = YᵀVΣ⁻¹ (zero columns where
    // σⱼ = 0, which the σⱼ-weighted projection identities never read).
    // Trailing eigenvalues may round below zero; the Gram is PSD, so they
    // are analytic zeros.
    let eig = if l <= n {
        sym_eig(&y.y().gram_at_a_scaled(1.0))
    } else {
        sym_eig(&y.y().transpose().gram_at_a_scaled(1.0))
    };

    // Eigenvalues within rounding of zero (relative to λmax) are analytic
    // zeros of the PSD Gram and are reported as exact zeros, matching the
    // rank structure the projection identities rely on.
    let lam_max = eig.values.first().map_or(0.0, |&v| v.max(0.0));
    let zero_tol = n.max(l) as f64 * f64::EPSILON * lam_max;
    let mut singular_values = Vec::with_capacity(k);
    let mut sq_singular_over_n2 = Vec::with_capacity(k);
    for &lam in eig.values.iter().take(k) {
        let lam = if lam <= zero_tol { 0.0 } else { lam };
        singular_values.push(sqrt(lam));
        sq_singular_over_n2.push(lam / n2);
    }

    let left = if l <= n {
        // k = l, so the eigenvector matrix is exactly L.
        eig.vectors
    } else {
        let v = &eig.vectors;
        Matrix::from_fn(l, k, |i, j| {
            if singular_values[j] > 0.0 {
                (0..n).map(|c| y.y().get(c, i) * v.get(c, j)).sum::<f64>() / singular_values[j]
            } else {
                0.0
            }
        })
    };

    KroneckerSpectrum { d, n, l, y: y.y().clone(), left, singular_values, sq_singular_over_n2 }
}

/// `C · v` block-wise: output block k = (1/n)Yᵀ·(v block k). O(nld).
pub fn apply_c(spec: &KroneckerSpectrum, v: &[f64]) -> Result<Vec<f64>> {
    let (d, n, l) = (spec.d, spec.n, spec.l);
    if v.len() != d * n {
        return Err(Error::DimMismatch { context: "apply_c: input must have length d*n" });
    }
    let mut out = vec![0.0f64; d * l];
    for k in 0..d {
        let vb = &v[k * n..(k + 1) * n];
        let ob = &mut out[k * l..(k + 1) * l];
        for (i, &vi) in vb.iter().enumerate() {
            if vi != 0.0 {
                axpy(vi, spec.y.row(i), ob);
            }
        }
    }
    let inv_n = 1.0 / n as f64;
    for o in out.iter_mut() {
        *o *= inv_n;
    }
    Ok(out)
}

/// `Cᵀ · g` block-wise: output block k = (1/n)Y·(g block k). O(nld).
pub fn apply_ct(spec: &KroneckerSpectrum, g: &[f64]) -> Result<Vec<f64>> {
    let (d, n, l) = (spec.d, spec.n, spec.l);
    if g.len() != d * l {
        return Err(Error::DimMismatch { context: "apply_ct: input must have length d*l" });
    }
    let inv_n = 1.0 / n as f64;
    let mut out = vec![0.0f64; d * n];
    for k in 0..d {
        let gb = &g[k * l..(k + 1) * l];
        let ob = &mut out[k * n..(k + 1) * n];
        for (i, o) in ob.iter_mut().enumerate() {
            *o = inv_n * dot(spec.y.row(i), gb);
        }
    }
    Ok(out)
}

/// Coordinates of `b = 2Cᵀg̃` along the nonzero eigendirections `I_d ⊗ V`,
/// block-major: block k holds the k coordinates `(2/n)·σⱼ·(Lᵀ g̃_k)ⱼ`.
///
/// The identity `VᵀY = ΣLᵀ` (from Yᵀ = LΣVᵀ) turns the näive
/// `Vᵀ·(2/n)Y·g̃_k` into one L-transform per block; coordinates along the
/// null space of C vanish analytically because b ∈ range(I_d ⊗ Y), and
/// coordinates with σⱼ = 0 are exact zeros here by the σⱼ factor.
pub fn eigenbasis_coords(spec: &KroneckerSpectrum, g_tilde: &[f64]) -> Result<Vec<f64>> {
    let (d, n, l) = (spec.d, spec.n, spec.l);
    if g_tilde.len() != d * l {
        return Err(Error::DimMismatch { context: "eigenbasis_coords: input must have length d*l" });
    }
    let kk = spec.k();
    let left = &spec.left; // l×k
    let two_over_n = 2.0 / n as f64;
    let mut coords = vec![0.0f64; d * kk];
    for k in 0..d {
        let gb = &g_tilde[k * l..(k + 1) * l];
        let cb = &mut coords[k * kk..(k + 1) * kk];
        for (i, &gi) in gb.iter().enumerate() {
            if gi != 0.0 {
                axpy(gi, left.row(i), cb);
            }
        }
        for (j, c) in cb.iter_mut().enumerate() {
            *c *= two_over_n * spec.singular_values[j];
        }
    }
    Ok(coords)
}

/// Euclidean projection of `g̃` onto `K = C·{‖x‖₂ ≤ √n·x_bound}`: solves
/// `min ‖Cx − g̃‖²` over the ball via one trust-region subproblem in the
/// eigenbasis, then maps back with ĝ block k = (1/n)L·(σ ∘ x̂ block k).
///
/// The trust-region coordinates interleave as index j·d + k (block k's j-th
/// singular direction), so the eigenvalue vector {λⱼ each d times} is sorted
/// nonincreasing as the subproblem requires.
pub fn project_onto_feasible(
    spec: &KroneckerSpectrum,
    g_tilde: &QueryAnswerVector,
    x_bound: f64,
) -> QueryAnswerVector {
    assert_eq!(g_tilde.d(), spec.d, "project_onto_feasible: d mismatch");
    assert_eq!(g_tilde.l(), spec.l, "project_onto_feasible: l mismatch");
    assert!(x_bound >= 0.0 && x_bound.is_finite(), "x_bound must be finite and nonnegative");
    let (d, n, l) = (spec.d, spec.n, spec.l);
    let kk = spec.k();

    let coords = eigenbasis_coords(spec, g_tilde.values()).expect("dimensions checked above");

    let mut eigenvalues = Vec::with_capacity(kk * d);
    let mut beta = vec![0.0f64; kk * d];
    for j in 0..kk {
        let lam = spec.sq_singular_over_n2[j];
        for k in 0..d {
            eigenvalues.push(lam);
            beta[j * d + k] = coords[k * kk + j];
        }
    }
    let radius = sqrt(n as f64) * x_bound;
    let problem = TrustRegionProblem::new(eigenvalues, beta, radius)
        .expect("squared singular values are nonnegative");
    let (x_hat, mu) = trust_region_solve(&problem);

    // Inactive constraint with a surjective operator (k = l, all σⱼ > 0):
    // the unconstrained minimizer attains zero residual, so the projection
    // is the identity. Return the input verbatim — this keeps the
    // non-expansiveness guarantee ‖ĝ−g‖ ≤ ‖g̃−g‖ exact in floating point
    // instead of up to an eigenbasis round trip.
    // (radius = 0 also reports μ = 0, but there the constraint is active.)
    if mu == 0.0 && radius > 0.0 && kk == l && kk > 0 && spec.sq_singular_over_n2[kk - 1] > 0.0
    {
        return g_tilde.clone();
    }

    // ĝ block k = (1/n)·L·(σ ∘ x̂ block k); σⱼ = 0 directions contribute
    // nothing, matching their analytically-zero coordinates.
    let inv_n = 1.0 / n as f64;
    let left = &spec.left;
    let mut out = vec![0.0f64; d * l];
    let mut scaled = vec![0.0f64; kk];
    for k in 0..d {
        for (j, s) in scaled.iter_mut().enumerate() {
            *s = spec.singular_values[j] * x_hat[j * d + k];
        }
        let ob = &mut out[k * l..(k + 1) * l];
        for (i, o) in ob.iter_mut().enumerate() {
            *o = inv_n * dot(left.row(i), &scaled);
        }
    }
    QueryAnswerVector::new(d, l, out)
}

/// The full projection mechanism: noise the true answers with radius
/// `r = c(ε, δ) · 2·sup_i‖yⁱ‖₂ · ‖𝒳‖ / n` (the factor 2 from replace-one
/// adjacency; the data-dependent sup is legitimate because Y is public),
/// then project back onto the feasible set. Returns the projected answers
/// and the radius used.
pub fn projection_mechanism<R: RngCore>(
    x: &DesignMatrix,
    y: &OutcomeMatrix,
    b: &PrivacyBudget,
    rng: &mut R,
) -> (QueryAnswerVector, NoiseSpec) {
    assert_eq!(x.n(), y.n(), "projection_mechanism: X and Y row counts differ");
    let (d, l, n) = (x.d(), y.l(), x.n());
    let g = true_answers(x, y).expect("dimensions checked above");
    let r = calibration_constant(b) * 2.0 * y.max_row_norm() * x.x_bound() / n as f64;

    let mut noise = vec![0.0f64; d * l];
    fill_standard_normal(rng, &mut noise);
    let g_tilde: Vec<f64> =
        g.values().iter().zip(&noise).map(|(&gv, &w)| gv + r * w).collect();
    let g_tilde = QueryAnswerVector::new(d, l, g_tilde);

    let spec = kron_spectrum(y, d);
    (project_onto_feasible(&spec, &g_tilde, x.x_bound()), NoiseSpec { sigma: r })
}
