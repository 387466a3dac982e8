//! Dense row-major matrices and the handful of multiply kernels the solvers
//! are built on.
//!
//! The kernels are written as contiguous-slice axpy/dot loops so they
//! autovectorize; the shapes exercised by the experiment harness go up to
//! `n = 2000`, `l = 4096` on one core, which is why the Gram products get
//! dedicated symmetric implementations instead of `a.transpose().matmul(a)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, axpy, dot, sqrt};

/// Dense matrix with entries stored in row-major order.
///
/// Construction enforces the type's invariants: at least one row and one
/// column, a buffer of exactly `rows * cols` entries, and all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Wraps `data` (row-major) as a `rows x cols` matrix.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must have at least one row and column");
        assert_eq!(data.len(), rows * cols, "buffer length must equal rows * cols");
        assert!(data.iter().all(|x| x.is_finite()), "matrix entries must be finite");
        Matrix { rows, cols, data }
    }

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must have at least one row and column");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix entrywise from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a contiguous slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j`, copied out (rows are the contiguous axis).
    pub fn col_copy(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// The raw row-major buffer.
    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions must agree");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut c = Matrix::zeros(m, n);
        for i in 0..m {
            let arow = self.row(i);
            let crow = &mut c.data[i * n..(i + 1) * n];
            for (p, &aip) in arow.iter().enumerate() {
                axpy(aip, &other.data[p * n..(p + 1) * n], crow);
            }
        }
        let _ = k;
        c
    }

    /// `selfᵀ * other` without materializing the transpose.
    pub fn matmul_at_b(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "matmul_at_b: row counts must agree");
        let (n, d, l) = (self.rows, self.cols, other.cols);
        let mut c = Matrix::zeros(d, l);
        for r in 0..n {
            let arow = self.row(r);
            let brow = other.row(r);
            for (i, &a) in arow.iter().enumerate() {
                axpy(a, brow, &mut c.data[i * l..(i + 1) * l]);
            }
        }
        c
    }

    /// `self * otherᵀ` via row-against-row dot products.
    pub fn matmul_a_bt(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "matmul_a_bt: column counts must agree");
        let (m, n) = (self.rows, other.rows);
        let mut c = Matrix::zeros(m, n);
        for i in 0..m {
            let arow = self.row(i);
            for j in 0..n {
                c.data[i * n + j] = dot(arow, other.row(j));
            }
        }
        c
    }

    /// `scale * selfᵀ * self`, exploiting symmetry (upper triangle computed,
    /// then mirrored). This is the covariance kernel.
    pub fn gram_at_a_scaled(&self, scale: f64) -> Matrix {
        let (n, d) = (self.rows, self.cols);
        let mut g = Matrix::zeros(d, d);
        for r in 0..n {
            let row = self.row(r);
            for i in 0..d {
                let xi = row[i];
                if xi != 0.0 {
                    axpy(xi, &row[i..], &mut g.data[i * d + i..(i + 1) * d]);
                }
            }
        }
        for i in 0..d {
            for j in i..d {
                let v = g.data[i * d + j] * scale;
                g.data[i * d + j] = v;
                g.data[j * d + i] = v;
            }
        }
        g
    }

    /// `scale * self * selfᵀ`, exploiting symmetry. This is the outcome Gram
    /// kernel used by the spectrum path when `l > n`.
    pub fn gram_a_at_scaled(&self, scale: f64) -> Matrix {
        let n = self.rows;
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            let ri = self.row(i);
            for j in i..n {
                let v = dot(ri, self.row(j)) * scale;
                g.data[i * n + j] = v;
                g.data[j * n + i] = v;
            }
        }
        g
    }

    /// Adds `lambda` to every diagonal entry (requires square).
    pub fn add_scaled_identity(&mut self, lambda: f64) {
        assert_eq!(self.rows, self.cols, "add_scaled_identity: matrix must be square");
        for i in 0..self.rows {
            self.data[i * self.cols + i] += lambda;
        }
    }

    /// Entrywise `self += other`.
    pub fn add_assign(&mut self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "add_assign: shapes must agree"
        );
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        sqrt(dot(&self.data, &self.data))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(abs(x)))
    }
}
