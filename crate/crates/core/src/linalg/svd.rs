//! Thin singular value decomposition via the Gram-matrix route.
//!
//! For `a` (m×n) with m ≥ n we eigendecompose G = aᵀa (n×n), take the right
//! singular vectors from the eigenbasis, and recompute each singular value as
//! σⱼ = ‖a·vⱼ‖ rather than √λⱼ: the recomputed value pairs with the left
//! vector uⱼ = a·vⱼ/σⱼ to machine precision, while √λⱼ inherits the
//! eigensolver's absolute error (and λⱼ may even round below zero for
//! trailing clusters). Wide inputs go through the transpose with the factors
//! swapped, so the expensive eigenproblem is always the smaller Gram matrix.
//!
//! The Gram route squares the condition number, so left directions with
//! σⱼ ≪ σmax are computed at reduced accuracy. The production caller (the
//! Kronecker spectrum of an outcome matrix) has aspect-ratio-bounded spectra
//! where that regime never appears; for adversarial inputs we defensively
//! re-orthogonalize any left column with σⱼ < 1e−2·σmax and replace
//! numerically-zero columns (σⱼ ≤ max(m,n)·ε·σmax, reported as exactly 0)
//! with an orthonormal completion, so the factor is a genuine isometry even
//! for rank-deficient input.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::eigen::sym_eig;
use crate::math::{norm2, sqrt};
use crate::matrix::Matrix;

/// Thin SVD `a = left · diag(singular_values) · rightᵀ` with k = min(m, n):
/// `left` is m×k and `right` is n×k, both with orthonormal columns;
/// `singular_values` is nonincreasing and nonnegative.
#[derive(Debug, Clone)]
pub struct ThinSVD {
    pub left: Matrix,
    pub singular_values: Vec<f64>,
    pub right: Matrix,
}

/// Thin SVD of a dense matrix. Deterministic for fixed input.
pub fn thin_svd(a: &Matrix) -> ThinSVD {
    if a.rows() < a.cols() {
        let t = thin_svd(&a.transpose());
        return ThinSVD { left: t.right, singular_values: t.singular_values, right: t.left };
    }
    let (m, k) = (a.rows(), a.cols());
    let gram = a.gram_at_a_scaled(1.0);
    let eig = sym_eig(&gram);
    let mut right = eig.vectors;
    let mut left = a.matmul(&right);

    // Column norms of a·V in one row-major pass; these are the σⱼ.
    let mut sq = vec![0.0f64; k];
    for i in 0..m {
        for (j, &x) in left.row(i).iter().enumerate() {
            sq[j] += x * x;
        }
    }
    let mut sigma: Vec<f64> = sq.iter().map(|&s| sqrt(s)).collect();
    let sigma_max = sigma.iter().fold(0.0f64, |a, &b| a.max(b));
    let zero_tol = m.max(k) as f64 * f64::EPSILON * sigma_max;

    let mut scale = vec![0.0f64; k];
    let mut rebuilt: Vec<usize> = Vec::new();
    for j in 0..k {
        if sigma[j] <= zero_tol {
            sigma[j] = 0.0;
            rebuilt.push(j);
        } else {
            scale[j] = 1.0 / sigma[j];
        }
    }
    for i in 0..m {
        for (j, x) in left.row_mut(i).iter_mut().enumerate() {
            *x *= scale[j];
        }
    }

    for j in 0..k {
        if sigma[j] > 0.0 && sigma[j] < 1e-2 * sigma_max && !reorthogonalize_column(&mut left, j) {
            rebuilt.push(j);
        }
    }
    rebuilt.sort_unstable();
    for &j in &rebuilt {
        complete_column(&mut left, j);
    }

    // σⱼ = ‖a·vⱼ‖ can break the eigenvalue ordering by rounding inside a
    // cluster; restore it by a (normally identity) stable permutation.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    if order.iter().enumerate().any(|(i, &o)| i != o) {
        left = permute_columns(&left, &order);
        right = permute_columns(&right, &order);
        sigma = order.iter().map(|&i| sigma[i]).collect();
    }

    ThinSVD { left, singular_values: sigma, right }
}

fn permute_columns(src: &Matrix, order: &[usize]) -> Matrix {
    Matrix::from_fn(src.rows(), src.cols(), |r, c| src.get(r, order[c]))
}

/// Two modified-Gram-Schmidt passes of column `j` against columns 0..j.
/// Returns false (and zeroes the column) if the direction was annihilated —
/// possible only when σⱼ is at rounding scale, where any orthonormal
/// replacement keeps the reconstruction bound.
fn reorthogonalize_column(u: &mut Matrix, j: usize) -> bool {
    let m = u.rows();
    let mut col: Vec<f64> = (0..m).map(|i| u.get(i, j)).collect();
    for _ in 0..2 {
        for c in 0..j {
            let mut d = 0.0;
            for (i, x) in col.iter().enumerate() {
                d += u.get(i, c) * x;
            }
            for (i, x) in col.iter_mut().enumerate() {
                *x -= d * u.get(i, c);
            }
        }
    }
    let nrm = norm2(&col);
    if nrm < 0.5 {
        for i in 0..m {
            u.set(i, j, 0.0);
        }
        return false;
    }
    for (i, x) in col.iter().enumerate() {
        u.set(i, j, x / nrm);
    }
    true
}

/// Fill the (currently zero) column `j` with a unit vector orthogonal to
/// every other column: take the canonical basis vector least represented in
/// the current columns and Gram-Schmidt it twice.
fn complete_column(u: &mut Matrix, j: usize) {
    let (m, k) = (u.rows(), u.cols());
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..m {
        let rn: f64 = u.row(i).iter().map(|x| x * x).sum();
        if rn < best {
            best = rn;
            best_i = i;
        }
    }
    let mut cand = vec![0.0f64; m];
    cand[best_i] = 1.0;
    for _ in 0..2 {
        for c in 0..k {
            if c == j {
                continue;
            }
            let mut d = 0.0;
            for (i, x) in cand.iter().enumerate() {
                d += u.get(i, c) * x;
            }
            for (i, x) in cand.iter_mut().enumerate() {
                *x -= d * u.get(i, c);
            }
        }
        let nrm = norm2(&cand);
        assert!(nrm > 1e-6, "thin_svd: orthonormal completion collapsed");
        for x in cand.iter_mut() {
            *x /= nrm;
        }
    }
    for (i, x) in cand.iter().enumerate() {
        u.set(i, j, *x);
    }
}
