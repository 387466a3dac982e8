//! Synthetic data generation for the experiment sweeps.
//!
//! The generative model mirrors the multi-phenotype regression setting: a
//! haplotype-like design `X` (n×d) whose entries are Bernoulli(maf_j) with
//! per-SNP minor-allele frequencies maf_j ~ U(0.05, 0.5), centered per SNP
//! and row-clipped to `x_bound`; per-outcome coefficient vectors
//! θᵢ ~ N(0, I_d/√d) (per-coordinate standard deviation d^{−1/4}); and
//! phenotypes y_{·i} = X·θᵢ + noise_std·N(0, I_n). The empirical bound
//! max|y_{ij}| is attached as `y_bound` — data-dependent bounds are fine
//! here because synthetic data is public; the solver APIs still require the
//! bound explicitly so the private-data caller must supply a public one.
//!
//! All randomness is drawn from phase-addressed streams keyed by the spec
//! seed: `DESIGN` for the haplotype matrix, `THETA`/`PHENO_NOISE` indexed by
//! outcome column, and `SNP_SELECT` for column subsampling. Column `i` of
//! the outcome matrix therefore never changes when `l` grows: extending a
//! sweep adds columns without perturbing existing ones.

use primo_core::query::OutcomeMatrix;
use primo_core::rng::{
    fill_standard_normal, index_stream, phase, sample_without_replacement, stream, uniform_unit,
    RngCore,
};
use primo_core::solver::DesignMatrix;
use primo_core::Matrix;

use crate::error::{HarnessError, Result};

/// Parameters of one synthetic dataset.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    /// Individuals.
    pub n: usize,
    /// SNPs (design columns).
    pub d: usize,
    /// Outcomes (phenotype columns).
    pub l: usize,
    /// Standard deviation of the additive phenotype noise.
    pub noise_std: f64,
    /// Per-coordinate standard deviation of θᵢ; the generative model uses
    /// d^{−1/4}, giving θᵢ covariance I_d/√d.
    pub theta_scale: f64,
    /// Root seed for every stream this dataset consumes.
    pub seed: u64,
}

impl SyntheticSpec {
    /// Model defaults: unit phenotype noise and θ-scale d^{−1/4}.
    pub fn new(n: usize, d: usize, l: usize, seed: u64) -> Self {
        let spec = Self {
            n,
            d,
            l,
            noise_std: 1.0,
            theta_scale: (d as f64).powf(-0.25),
            seed,
        };
        spec.validate();
        spec
    }

    pub fn validate(&self) {
        assert!(self.n >= 1 && self.d >= 1 && self.l >= 1, "synthetic counts must be >= 1");
        assert!(
            self.noise_std >= 0.0 && self.noise_std.is_finite(),
            "noise_std must be finite and nonnegative"
        );
        assert!(
            self.theta_scale >= 0.0 && self.theta_scale.is_finite(),
            "theta_scale must be finite and nonnegative"
        );
    }
}

/// Generates the haplotype-like design: entries Bernoulli(maf_j) with
/// maf_j ~ U(0.05, 0.5) per column, centered per SNP, rows clipped to
/// `x_bound` by the [`DesignMatrix`] constructor.
pub fn synthetic_design(n: usize, d: usize, x_bound: f64, seed: u64) -> DesignMatrix {
    assert!(n >= 1 && d >= 1, "design shape must be nonempty");
    let mut rng = stream(seed, phase::DESIGN, b"");
    let mut m = Matrix::zeros(n, d);
    for j in 0..d {
        let maf = 0.05 + 0.45 * uniform_unit(&mut rng);
        for i in 0..n {
            let allele = if uniform_unit(&mut rng) < maf { 1.0 } else { 0.0 };
            m.set(i, j, allele);
        }
    }
    center_columns(&mut m);
    DesignMatrix::new(m, x_bound)
}

/// Subtracts each column's mean in place (per-SNP centering).
fn center_columns(m: &mut Matrix) {
    let n = m.rows();
    for j in 0..m.cols() {
        let mut mean = 0.0;
        for i in 0..n {
            mean += m.get(i, j);
        }
        mean /= n as f64;
        for i in 0..n {
            m.set(i, j, m.get(i, j) - mean);
        }
    }
}

/// Selects `d` columns uniformly without replacement, centers each selected
/// column (per-SNP mean subtraction), and wraps the result with `x_bound`
/// set to the post-centering maximum row norm. Suitable only for public or
/// synthetic data: a data-dependent bound is not private in general.
pub fn center_and_subsample_snps(
    x: &Matrix,
    d: usize,
    rng: &mut impl RngCore,
) -> Result<DesignMatrix> {
    if d == 0 || d > x.cols() {
        return Err(HarnessError::Data(format!(
            "cannot subsample {d} SNPs from a matrix with {} columns",
            x.cols()
        )));
    }
    let chosen = sample_without_replacement(rng, x.cols(), d);
    let mut sub = Matrix::from_fn(x.rows(), d, |i, j| x.get(i, chosen[j]));
    center_columns(&mut sub);
    let max_row_norm = (0..sub.rows())
        .map(|i| sub.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    Ok(DesignMatrix::new(sub, max_row_norm))
}

/// Draws `Y = XΘ + noise_std·E` column by column: θᵢ from the `THETA`
/// stream at index `i`, noise from the `PHENO_NOISE` stream at index `i`,
/// both keyed by `spec.seed`. `y_bound` is the empirical max |y_{ij}|.
pub fn generate_phenotypes(x: &DesignMatrix, spec: &SyntheticSpec) -> OutcomeMatrix {
    spec.validate();
    assert!(spec.d == x.d(), "spec.d must match the design's column count");
    assert!(spec.n == x.n(), "spec.n must match the design's row count");
    let (n, d, l) = (spec.n, spec.d, spec.l);

    let mut y = Matrix::zeros(n, l);
    let mut theta = vec![0.0; d];
    let mut noise = vec![0.0; n];
    for i in 0..l {
        let mut theta_rng = index_stream(spec.seed, phase::THETA, i as u64);
        fill_standard_normal(&mut theta_rng, &mut theta);
        for t in theta.iter_mut() {
            *t *= spec.theta_scale;
        }
        let mut noise_rng = index_stream(spec.seed, phase::PHENO_NOISE, i as u64);
        fill_standard_normal(&mut noise_rng, &mut noise);
        for (r, &nz) in noise.iter().enumerate() {
            let mut acc = 0.0;
            let row = x.x().row(r);
            for k in 0..d {
                acc += row[k] * theta[k];
            }
            y.set(r, i, acc + spec.noise_std * nz);
        }
    }

    let y_bound = y.data().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    OutcomeMatrix::new(y, y_bound)
}
