//! Deterministic random-number plumbing.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 generator
//! addressed by `(seed, stream)`, where the 64-bit stream id is an FNV-1a
//! hash of a phase tag plus a payload. Streams are therefore:
//!
//! - reproducible: the same `(seed, phase, payload)` triple always yields the
//!   same draws, on every platform (ChaCha and the Box–Muller transform below
//!   are fully specified; transcendentals route through `libm`);
//! - independent: distinct phases or payloads address distinct ChaCha streams,
//!   so adding draws to one phase never perturbs another;
//! - content-addressed where it matters: per-outcome-column noise is keyed by
//!   the column's bytes, which makes the solvers equivariant under column
//!   permutations of the outcome matrix (permuting columns permutes solutions,
//!   seed-matched). The flip side, shared draws for byte-identical columns, is
//!   acceptable because outcome columns are public data.
//!
//! Noise quality note: ChaCha8 is cryptographically strong as a stream cipher,
//! but floating-point Gaussian sampling (here: Box–Muller over 53-bit
//! uniforms) is not a secure-against-floating-point-attacks DP sampler; this
//! library targets reproducible desk-scale experiments, not hardened
//! deployments.

use alloc::vec::Vec;

use rand_core::SeedableRng;

// Re-exported so downstream crates can name the generator type returned by
// `stream` (and write generic bounds) without pinning rand versions.
pub use rand_chacha::ChaCha8Rng;
pub use rand_core::RngCore;

use crate::math::{cos, ln, sqrt};

/// Stream phase tags. One byte per logical consumer of randomness.
pub mod phase {
    /// Symmetric noise added to the covariance term.
    pub const COVARIANCE: u8 = 1;
    /// Per-column Gaussian noise on the association term.
    pub const ASSOCIATION: u8 = 2;
    /// The projection mechanism's single dl-dimensional draw.
    pub const PROJECTION: u8 = 3;
    /// Without-replacement row subsampling.
    pub const SUBSAMPLE: u8 = 4;
    /// Synthetic effect vectors (harness).
    pub const THETA: u8 = 5;
    /// Synthetic phenotype observation noise (harness).
    pub const PHENO_NOISE: u8 = 6;
    /// Synthetic design-matrix generation (harness).
    pub const DESIGN: u8 = 7;
    /// SNP column selection (harness).
    pub const SNP_SELECT: u8 = 8;
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a 64-bit hash.
#[derive(Clone, Copy)]
pub struct Fnv1a(u64);

impl Fnv1a {
    pub fn new() -> Self {
        Fnv1a(FNV_OFFSET)
    }

    pub fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

impl Default for Fnv1a {
    fn default() -> Self {
        Self::new()
    }
}

/// Generator for `(seed, phase, payload)`.
pub fn stream(seed: u64, phase: u8, payload: &[u8]) -> ChaCha8Rng {
    let mut h = Fnv1a::new();
    h.update(&[phase]);
    h.update(payload);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h.finish());
    rng
}

/// Stream addressed by a numeric index (e.g. the i-th baseline regression).
pub fn index_stream(seed: u64, phase: u8, index: u64) -> ChaCha8Rng {
    stream(seed, phase, &index.to_le_bytes())
}

/// Stream addressed by the content of a column of values.
pub fn column_stream(seed: u64, phase: u8, column: &[f64]) -> ChaCha8Rng {
    let mut h = Fnv1a::new();
    h.update(&[phase]);
    for &x in column {
        h.update(&x.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h.finish());
    rng
}

/// Uniform draw in the open interval (0, 1) with 53-bit resolution.
/// Never returns 0 or 1, so it is safe under `ln`.
#[inline]
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw via the Box–Muller transform.
///
/// Consumes exactly two 64-bit words per call (the sine branch is discarded),
/// which keeps stream consumption trivially predictable.
#[inline]
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = uniform_unit(rng);
    let u2 = uniform_unit(rng);
    sqrt(-2.0 * ln(u1)) * cos(2.0 * core::f64::consts::PI * u2)
}

/// Fills `out` with i.i.d. standard normal draws.
pub fn fill_standard_normal(rng: &mut impl RngCore, out: &mut [f64]) {
    for x in out.iter_mut() {
        *x = standard_normal(rng);
    }
}

/// Unbiased uniform draw from `0..m` by rejection.
pub fn uniform_below(rng: &mut impl RngCore, m: u64) -> u64 {
    assert!(m >= 1, "uniform_below requires m >= 1");
    let zone = u64::MAX - u64::MAX % m;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % m;
        }
    }
}

/// Uniform without-replacement sample of `s` indices from `0..n`, returned
/// sorted ascending. `s = n` yields the identity selection exactly, which is
/// what makes full-sample subsampling coincide bitwise with no subsampling.
pub fn sample_without_replacement(rng: &mut impl RngCore, n: usize, s: usize) -> Vec<usize> {
    assert!(s <= n, "cannot sample {s} of {n} without replacement");
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..s {
        let j = i + uniform_below(rng, (n - i) as u64) as usize;
        indices.swap(i, j);
    }
    indices.truncate(s);
    indices.sort_unstable();
    indices
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn streams_are_reproducible_and_phase_separated() {
        let mut a = stream(7, phase::COVARIANCE, &[]);
        let mut b = stream(7, phase::COVARIANCE, &[]);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = stream(7, phase::ASSOCIATION, &[]);
        let mut d = stream(8, phase::COVARIANCE, &[]);
        let mut a2 = stream(7, phase::COVARIANCE, &[]);
        let base = a2.next_u64();
        assert_ne!(base, c.next_u64());
        assert_ne!(base, d.next_u64());
    }

    #[test]
    fn column_stream_is_content_addressed() {
        let col = [1.0, -2.5, 3.25];
        let same = [1.0, -2.5, 3.25];
        let other = [1.0, -2.5, 3.250000001];
        let mut a = column_stream(3, phase::ASSOCIATION, &col);
        let mut b = column_stream(3, phase::ASSOCIATION, &same);
        let mut c = column_stream(3, phase::ASSOCIATION, &other);
        let va = a.next_u64();
        assert_eq!(va, b.next_u64());
        assert_ne!(va, c.next_u64());
    }

    #[test]
    fn uniform_unit_stays_strictly_inside() {
        let mut rng = stream(1, phase::DESIGN, &[]);
        for _ in 0..10_000 {
            let u = uniform_unit(&mut rng);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn standard_normal_moments() {
        let mut rng = stream(42, phase::PHENO_NOISE, &[]);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let x = standard_normal(&mut rng);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn uniform_below_ranges() {
        let mut rng = stream(5, phase::SUBSAMPLE, &[]);
        for m in [1u64, 2, 3, 17, 1000] {
            for _ in 0..200 {
                assert!(uniform_below(&mut rng, m) < m);
            }
        }
    }

    #[test]
    fn wor_sample_is_sorted_unique_and_identity_at_full_size() {
        let mut rng = stream(11, phase::SUBSAMPLE, &[]);
        let s = sample_without_replacement(&mut rng, 50, 20);
        assert_eq!(s.len(), 20);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&i| i < 50));

        let mut rng2 = stream(11, phase::SUBSAMPLE, &[]);
        let full = sample_without_replacement(&mut rng2, 50, 50);
        let expect: Vec<usize> = (0..50).collect();
        assert_eq!(full, expect);
    }

    #[test]
    fn wor_sample_covers_all_indices_over_seeds() {
        let mut seen = [false; 10];
        for seed in 0..200u64 {
            let mut rng = stream(seed, phase::SUBSAMPLE, &[]);
            for i in sample_without_replacement(&mut rng, 10, 3) {
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }
}
