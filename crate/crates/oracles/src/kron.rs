//! Explicit materialization of the block-diagonal query operator and a
//! projected-gradient reference solver for the feasible-set projection.

use primo_core::Matrix;

use crate::jacobi::max_eigenvalue;

/// Materialized `C = I_d ⊗ (1/n)Yᵀ`, shape `(d·l) × (d·n)`.
pub struct DenseKroneckerC {
    pub matrix: Matrix,
    pub d: usize,
    pub n: usize,
    pub l: usize,
}

/// Builds the explicit block-diagonal matrix. Guarded to test scale:
/// `d·n ≤ 10⁴`.
pub fn materialize_c(y: &Matrix, d: usize) -> DenseKroneckerC {
    let n = y.rows();
    let l = y.cols();
    assert!(d * n <= 10_000, "materialize_c: test-scale guard d*n <= 1e4 violated");
    let inv_n = 1.0 / n as f64;
    let mut m = Matrix::zeros(d * l, d * n);
    for k in 0..d {
        for j in 0..l {
            for i in 0..n {
                // Block (k, k) equals (1/n)Yᵀ, i.e. entry (j, i) = y[i, j]/n.
                m.set(k * l + j, k * n + i, y.get(i, j) * inv_n);
            }
        }
    }
    DenseKroneckerC { matrix: m, d, n, l }
}

/// Dense `C · x`.
pub fn apply_dense(c: &DenseKroneckerC, x: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), c.matrix.cols(), "apply_dense: length mismatch");
    (0..c.matrix.rows())
        .map(|r| {
            let mut s = 0.0;
            for (j, &xv) in x.iter().enumerate() {
                s += c.matrix.get(r, j) * xv;
            }
            s
        })
        .collect()
}

/// Dense `Cᵀ · g`.
pub fn apply_dense_t(c: &DenseKroneckerC, g: &[f64]) -> Vec<f64> {
    assert_eq!(g.len(), c.matrix.rows(), "apply_dense_t: length mismatch");
    let mut out = vec![0.0; c.matrix.cols()];
    for (r, &gv) in g.iter().enumerate() {
        if gv != 0.0 {
            for (j, o) in out.iter_mut().enumerate() {
                *o += c.matrix.get(r, j) * gv;
            }
        }
    }
    out
}

/// Projection of `g_tilde` onto `{Cx : ‖x‖₂ ≤ radius}` by projected gradient
/// descent: 10⁵ iterations of `min_x ‖Cx − g̃‖²` with step `1/(2λ_max + 2)`
/// and an ℓ₂-ball projection after every step. Returns `C·x̂`.
pub fn brute_force_projection(c: &DenseKroneckerC, g_tilde: &[f64], radius: f64) -> Vec<f64> {
    assert!(radius >= 0.0);
    if radius == 0.0 {
        return vec![0.0; g_tilde.len()];
    }
    let ctc = matmul_t_self(&c.matrix);
    let lmax = max_eigenvalue(&ctc).max(0.0);
    let step = 1.0 / (2.0 * lmax + 2.0);

    let mut x = vec![0.0; c.matrix.cols()];
    for _ in 0..100_000 {
        // grad = 2 Cᵀ (Cx − g̃)
        let mut cx = apply_dense(c, &x);
        for (v, &g) in cx.iter_mut().zip(g_tilde) {
            *v -= g;
        }
        let grad = apply_dense_t(c, &cx);
        for (xv, gv) in x.iter_mut().zip(&grad) {
            *xv -= step * 2.0 * gv;
        }
        // Euclidean ball projection.
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            let scale = radius / norm;
            for xv in x.iter_mut() {
                *xv *= scale;
            }
        }
    }
    apply_dense(c, &x)
}

/// `AᵀA` by the naive triple loop (local to the oracle; not the production
/// Gram kernel).
fn matmul_t_self(a: &Matrix) -> Matrix {
    let mut g = Matrix::zeros(a.cols(), a.cols());
    for i in 0..a.cols() {
        for j in 0..a.cols() {
            let mut s = 0.0;
            for r in 0..a.rows() {
                s += a.get(r, i) * a.get(r, j);
            }
            g.set(i, j, s);
        }
    }
    g
}
