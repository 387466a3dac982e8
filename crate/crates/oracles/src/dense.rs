//! Naive dense linear algebra: textbook triple loops and an LU solve with
//! partial pivoting. Deliberately written without reference to the production
//! kernels (no shared helpers, no blocking, no transpose tricks).

use primo_core::Matrix;

/// Textbook `i, j, k` triple-loop product.
pub fn matmul_naive(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.rows(), "matmul_naive: inner dimensions must agree");
    let mut c = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = 0.0;
            for k in 0..a.cols() {
                s += a.get(i, k) * b.get(k, j);
            }
            c.set(i, j, s);
        }
    }
    c
}

/// Solves `A · X = B` for square `A` by LU decomposition with partial
/// pivoting followed by forward/back substitution. Panics on singular `A`
/// (this is a test oracle; singular inputs are test bugs).
pub fn lu_solve(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.rows(), a.cols(), "lu_solve: A must be square");
    assert_eq!(a.rows(), b.rows(), "lu_solve: A and B row counts must agree");
    let n = a.rows();
    let k = b.cols();

    // Working copies: `lu` holds the factors in place, `x` the solutions.
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        // Pivot selection.
        let mut pivot_row = col;
        let mut pivot_val = lu.get(col, col).abs();
        for r in col + 1..n {
            let v = lu.get(r, col).abs();
            if v > pivot_val {
                pivot_row = r;
                pivot_val = v;
            }
        }
        assert!(pivot_val > 1e-300, "lu_solve: singular matrix at column {col}");
        if pivot_row != col {
            for j in 0..n {
                let tmp = lu.get(col, j);
                lu.set(col, j, lu.get(pivot_row, j));
                lu.set(pivot_row, j, tmp);
            }
            for j in 0..k {
                let tmp = x.get(col, j);
                x.set(col, j, x.get(pivot_row, j));
                x.set(pivot_row, j, tmp);
            }
            perm.swap(col, pivot_row);
        }
        // Elimination.
        let inv = 1.0 / lu.get(col, col);
        for r in col + 1..n {
            let factor = lu.get(r, col) * inv;
            lu.set(r, col, factor);
            for j in col + 1..n {
                let v = lu.get(r, j) - factor * lu.get(col, j);
                lu.set(r, j, v);
            }
            for j in 0..k {
                let v = x.get(r, j) - factor * x.get(col, j);
                x.set(r, j, v);
            }
        }
    }

    // Back substitution on the upper factor.
    for col in (0..n).rev() {
        let inv = 1.0 / lu.get(col, col);
        for j in 0..k {
            let mut s = x.get(col, j);
            for p in col + 1..n {
                s -= lu.get(col, p) * x.get(p, j);
            }
            x.set(col, j, s * inv);
        }
    }
    x
}

/// Vector convenience wrapper over [`lu_solve`].
pub fn lu_solve_vec(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let bm = Matrix::new(b.len(), 1, b.to_vec());
    lu_solve(a, &bm).data().to_vec()
}
