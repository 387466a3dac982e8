//! Householder QR factorization and triangular solves.
//!
//! The solvers factor the (possibly indefinite, possibly singular) noisy
//! covariance once and then back-substitute one right-hand side per outcome,
//! so `qr_decompose` must accept any finite square input — singularity is
//! detected later, at solve time, via the diagonal threshold.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, axpy, dot, norm2};
use crate::matrix::Matrix;

/// Relative diagonal threshold below which a triangular system is treated as
/// singular: `|r_ii| <= SINGULARITY_RTOL * max_j |r_jj|`.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Explicit QR factors of a square matrix: `q` orthonormal, `r` upper
/// triangular (exact zeros below the diagonal), `q · r` reconstructing the
/// input.
#[derive(Debug, Clone)]
pub struct QRFactors {
    pub q: Matrix,
    pub r: Matrix,
}

/// Householder QR of a square matrix.
///
/// Works for singular inputs (`r` may carry zero diagonal entries). Columns
/// whose subdiagonal part is exactly zero are skipped, so diagonal and upper
/// triangular inputs factor as `q = I`, `r = a` exactly.
pub fn qr_decompose(a: &Matrix) -> Result<QRFactors> {
    let d = a.rows();
    if d != a.cols() {
        return Err(Error::NonSquare { rows: d, cols: a.cols() });
    }

    let mut r = a.clone();
    // Householder vectors, one per eliminated column (empty when skipped).
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));

    for k in 0..d.saturating_sub(1) {
        // Column k at and below the diagonal.
        let mut v: Vec<f64> = (k..d).map(|i| r.get(i, k)).collect();
        let below = v[1..].iter().fold(0.0f64, |m, &x| m.max(abs(x)));
        if below == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let norm = norm2(&v);
        // alpha = -sign(v₀)·‖v‖ maximizes |v₀ - alpha| for stability.
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let beta = 2.0 / dot(&v, &v);

        // Apply H = I - beta·v·vᵀ to the trailing block r[k.., k..].
        apply_reflector_rows(&mut r, k, &v, beta);
        // The eliminated column is exactly alpha over exact zeros.
        r.set(k, k, alpha);
        for i in k + 1..d {
            r.set(i, k, 0.0);
        }
        reflectors.push(v);
    }

    // Accumulate q = H₀·H₁·…·I backwards; at step k only the trailing
    // (d-k)×(d-k) window of q differs from the identity.
    let mut q = Matrix::identity(d);
    for k in (0..reflectors.len()).rev() {
        let v = &reflectors[k];
        if v.is_empty() {
            continue;
        }
        let beta = 2.0 / dot(v, v);
        apply_reflector_rows(&mut q, k, v, beta);
    }

    Ok(QRFactors { q, r })
}

/// In-place `m[k.., k..] ← (I − beta·v·vᵀ) · m[k.., k..]` with contiguous row
/// arithmetic: `w = vᵀ·M`, then `M −= beta·v·wᵀ`.
fn apply_reflector_rows(m: &mut Matrix, k: usize, v: &[f64], beta: f64) {
    let d = m.cols();
    let mut w = vec![0.0f64; d - k];
    for (i, &vi) in v.iter().enumerate() {
        axpy(vi, &m.row(k + i)[k..], &mut w);
    }
    for (i, &vi) in v.iter().enumerate() {
        axpy(-beta * vi, &w, &mut m.row_mut(k + i)[k..]);
    }
}

/// Solves `r · w = v` for upper triangular `r` by back substitution.
///
/// Returns `Error::SingularSystem` if any diagonal entry falls at or below
/// `1e-12 · max_i |r_ii|` (a λ > 0 ridge floor in callers makes genuine
/// singularity a caller bug, but noise can produce it, so it is surfaced).
pub fn back_substitute(r: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    let rhs = Matrix::new(v.len(), 1, v.to_vec());
    let w = back_substitute_matrix(r, &rhs)?;
    Ok(w.data().to_vec())
}

/// Batched back substitution: solves `r · W = M` column-wise in one pass.
/// Identical arithmetic to [`back_substitute`] applied per column, but the
/// inner loops stream along the row axis so the l outcomes of one experiment
/// solve at memory bandwidth.
pub fn back_substitute_matrix(r: &Matrix, m: &Matrix) -> Result<Matrix> {
    let d = r.rows();
    if d != r.cols() {
        return Err(Error::NonSquare { rows: d, cols: r.cols() });
    }
    if m.rows() != d {
        return Err(Error::DimMismatch { context: "back_substitute right-hand side" });
    }
    debug_assert!(
        (0..d).all(|i| (0..i).all(|j| r.get(i, j) == 0.0)),
        "back_substitute requires an upper triangular matrix"
    );

    let max_diag = (0..d).fold(0.0f64, |acc, i| acc.max(abs(r.get(i, i))));
    for i in 0..d {
        if abs(r.get(i, i)) <= SINGULARITY_RTOL * max_diag {
            return Err(Error::SingularSystem { index: i });
        }
    }

    let l = m.cols();
    let mut w = m.clone();
    for i in (0..d).rev() {
        // w[i,:] = (m[i,:] − Σ_{p>i} r[i,p]·w[p,:]) / r[i,i]
        let (head, tail) = w.data_mut().split_at_mut((i + 1) * l);
        let wi = &mut head[i * l..];
        for p in i + 1..d {
            let rip = r.get(i, p);
            if rip != 0.0 {
                axpy(-rip, &tail[(p - i - 1) * l..(p - i) * l], wi);
            }
        }
        let inv = 1.0 / r.get(i, i);
        for x in wi.iter_mut() {
            *x *= inv;
        }
    }
    Ok(w)
}
