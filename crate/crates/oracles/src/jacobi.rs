//! Cyclic Jacobi eigensolver for symmetric matrices.
//!
//! A deliberately different algorithm family from the production
//! tridiagonalization + QL eigensolver: Jacobi annihilates off-diagonal
//! entries one rotation at a time and converges quadratically once the
//! off-diagonal mass is small. O(n³) per sweep and test-scale only.

use primo_core::Matrix;

/// Eigendecomposition of a symmetric matrix.
///
/// `values[j]` (sorted nonincreasing) pairs with column `j` of `vectors`;
/// `A = vectors · diag(values) · vectorsᵀ`.
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi with threshold sweeps.
///
/// Panics if `a` is not square or not symmetric to 1e-9 (oracle inputs are
/// constructed symmetric; asymmetry is a test bug).
pub fn jacobi_eig(a: &Matrix) -> SymEig {
    let n = a.rows();
    assert_eq!(n, a.cols(), "jacobi_eig: matrix must be square");
    for i in 0..n {
        for j in 0..i {
            assert!(
                (a.get(i, j) - a.get(j, i)).abs() <= 1e-9 * (1.0 + a.max_abs()),
                "jacobi_eig: matrix must be symmetric"
            );
        }
    }

    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs().max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m.get(p, q).abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                // Classic stable rotation computation.
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Apply the rotation to rows/columns p and q of `m`.
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                // Accumulate eigenvectors (columns).
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    // Extract and sort nonincreasing, carrying the eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let values_raw: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    order.sort_by(|&i, &j| values_raw[j].partial_cmp(&values_raw[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| values_raw[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    SymEig { values, vectors }
}

/// Largest eigenvalue of a symmetric matrix (used for PGD step sizes).
pub fn max_eigenvalue(a: &Matrix) -> f64 {
    jacobi_eig(a).values[0]
}
