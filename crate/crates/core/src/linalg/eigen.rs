//! Symmetric eigendecomposition: Householder tridiagonalization followed by
//! the implicit-shift QL iteration, with eigenvector accumulation.
//!
//! This is the classic tred2/tql2 pair. Two implementation choices matter at
//! the sizes the spectrum path reaches (n = 2000 on one core):
//!
//! - the tridiagonalization applies the standard symmetric rank-2 update with
//!   contiguous row arithmetic;
//! - the QL rotations act on an eigenvector matrix kept *transposed*
//!   (candidate eigenvectors as rows), so each plane rotation streams over two
//!   adjacent rows instead of striding down two columns.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, axpy, copysign, dot, hypot, norm2};
use crate::matrix::Matrix;

/// Eigendecomposition of a symmetric matrix: `values` sorted nonincreasing,
/// column `j` of `vectors` the unit eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Panics if the input is not square or departs from symmetry by more than
/// `1e-9` relative (callers construct exactly symmetric matrices; asymmetry
/// is a bug, not data).
pub fn sym_eig(a: &Matrix) -> SymEigen {
    let n = a.rows();
    assert_eq!(n, a.cols(), "sym_eig: matrix must be square");
    let scale = a.max_abs().max(1.0);
    for i in 0..n {
        for j in 0..i {
            assert!(
                abs(a.get(i, j) - a.get(j, i)) <= 1e-9 * scale,
                "sym_eig: matrix must be symmetric"
            );
        }
    }

    if n == 1 {
        return SymEigen { values: vec![a.get(0, 0)], vectors: Matrix::identity(1) };
    }

    // --- Householder tridiagonalization -------------------------------
    let mut m = a.clone();
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n]; // off[i] couples (i, i+1); off[n-1] scratch
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(2));

    for k in 0..n - 2 {
        let mut v: Vec<f64> = (k + 1..n).map(|i| m.get(i, k)).collect();
        let below = v[1..].iter().fold(0.0f64, |acc, &x| acc.max(abs(x)));
        if below == 0.0 {
            off[k] = v[0];
            reflectors.push(Vec::new());
            continue;
        }
        let norm = norm2(&v);
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        off[k] = alpha;
        v[0] -= alpha;
        let beta = 2.0 / dot(&v, &v);

        // Symmetric rank-2 update of the trailing block B = m[k+1.., k+1..]:
        // p = beta·B·v, w = p − (beta·vᵀp/2)·v, B ← B − v·wᵀ − w·vᵀ.
        let mm = n - k - 1;
        let mut p = vec![0.0f64; mm];
        for (i, pi) in p.iter_mut().enumerate() {
            *pi = beta * dot(&m.row(k + 1 + i)[k + 1..], &v);
        }
        let kappa = 0.5 * beta * dot(&v, &p);
        let mut w = p;
        axpy(-kappa, &v, &mut w);
        for i in 0..mm {
            let row = &mut m.row_mut(k + 1 + i)[k + 1..];
            axpy(-v[i], &w, row);
            axpy(-w[i], &v, row);
        }
        reflectors.push(v);
    }
    off[n - 2] = m.get(n - 1, n - 2);
    for i in 0..n {
        diag[i] = m.get(i, i);
    }

    // Accumulate Q = H₀·H₁·… backwards; at step k only the trailing window
    // [k+1.., k+1..] of Q differs from the identity.
    let mut q = Matrix::identity(n);
    for k in (0..reflectors.len()).rev() {
        let v = &reflectors[k];
        if v.is_empty() {
            continue;
        }
        let beta = 2.0 / dot(v, v);
        let mut w = vec![0.0f64; n - k - 1];
        for (i, &vi) in v.iter().enumerate() {
            axpy(vi, &q.row(k + 1 + i)[k + 1..], &mut w);
        }
        for (i, &vi) in v.iter().enumerate() {
            axpy(-beta * vi, &w, &mut q.row_mut(k + 1 + i)[k + 1..]);
        }
    }

    // --- Implicit-shift QL on (diag, off) ------------------------------
    // Eigenvectors accumulate in transposed layout: row i of `wt` is the
    // candidate eigenvector that pairs with diag[i].
    let mut wt = q.transpose();
    tql2(&mut diag, &mut off, &mut wt);

    // Sort nonincreasing, permuting rows of `wt`, then hand back columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| wt.get(order[c], r));
    SymEigen { values, vectors }
}

/// Implicit-shift QL sweeps on a symmetric tridiagonal matrix, rotating the
/// rows of `wt` along. `d` holds the diagonal, `e[i]` the (i, i+1) coupling.
fn tql2(d: &mut [f64], e: &mut [f64], wt: &mut Matrix) {
    let n = d.len();
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // First negligible coupling at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 80, "tql2: eigenvalue {l} failed to converge");

            // Wilkinson-style shift.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut early = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                rotate_adjacent_rows(wt, i, s, c);
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Plane rotation of rows `i`, `i+1`:
/// `(row_i, row_{i+1}) ← (c·row_i − s·row_{i+1}, s·row_i + c·row_{i+1})`.
#[inline]
fn rotate_adjacent_rows(wt: &mut Matrix, i: usize, s: f64, c: f64) {
    let n = wt.cols();
    let pair = &mut wt.data_mut()[i * n..(i + 2) * n];
    let (top, bottom) = pair.split_at_mut(n);
    for (t, b) in top.iter_mut().zip(bottom.iter_mut()) {
        let f = *b;
        *b = s * *t + c * f;
        *t = c * *t - s * f;
    }
}
