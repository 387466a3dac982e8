//! Property-based contracts: each test states an algebraic invariant —
//! clipping, answer-vector layout, calibration monotonicity, subsampling —
//! and lets proptest hunt for counterexamples over randomized inputs.

use proptest::prelude::*;

use primo_core::math::norm2;
use primo_core::privacy::{calibration_constant, subsample_amplified_budget, PrivacyBudget};
use primo_core::query::QueryAnswerVector;
use primo_core::rng::{sample_without_replacement, stream};
use primo_core::solver::DesignMatrix;
use primo_core::Matrix;

fn design_inputs() -> impl Strategy<Value = (usize, usize, Vec<f64>, f64)> {
    (1usize..6, 1usize..6, 0.0f64..8.0).prop_flat_map(|(n, d, bound)| {
        (Just(n), Just(d), proptest::collection::vec(-100.0f64..100.0, n * d), Just(bound))
    })
}

fn answer_inputs() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1usize..8, 1usize..8)
        .prop_flat_map(|(d, l)| (Just(d), Just(l), proptest::collection::vec(-1e6f64..1e6, d * l)))
}

proptest! {
    /// Construction clips every row onto the ℓ₂ ball — the norm bound holds
    /// exactly, not merely up to rounding — and rows already inside the ball
    /// pass through bitwise.
    #[test]
    fn design_rows_are_clipped_exactly((n, d, entries, bound) in design_inputs()) {
        let raw = Matrix::new(n, d, entries);
        let design = DesignMatrix::new(raw.clone(), bound);
        for i in 0..n {
            prop_assert!(norm2(design.x().row(i)) <= bound);
            if norm2(raw.row(i)) <= bound {
                prop_assert_eq!(design.x().row(i), raw.row(i));
            }
        }
    }

    /// The answer vector is the row-major flattening of the d×l association
    /// matrix: entry (k, j) lives at index k·l + j, and `to_matrix` inverts
    /// the flattening bitwise.
    #[test]
    fn answer_vector_layout_round_trips((d, l, values) in answer_inputs()) {
        let answers = QueryAnswerVector::new(d, l, values.clone());
        let m = answers.to_matrix();
        prop_assert_eq!(m.data(), &values[..]);
        for k in 0..d {
            for j in 0..l {
                prop_assert_eq!(m.get(k, j).to_bits(), values[k * l + j].to_bits());
            }
        }
    }

    /// c(ε, δ) is strictly decreasing in both arguments: more budget means
    /// less noise.
    #[test]
    fn calibration_constant_is_strictly_decreasing(
        eps in 1e-3f64..10.0,
        eps_factor in 1.01f64..4.0,
        delta in 1e-9f64..0.3,
        delta_factor in 1.01f64..3.0,
    ) {
        let base = calibration_constant(&PrivacyBudget::new(eps, delta));
        let more_eps = calibration_constant(&PrivacyBudget::new(eps * eps_factor, delta));
        let more_delta = calibration_constant(&PrivacyBudget::new(eps, delta * delta_factor));
        prop_assert!(more_eps < base);
        prop_assert!(more_delta < base);
    }

    /// Amplification degenerates to the plain half split at s = n (exactly:
    /// halving is lossless in binary floating point), spends strictly more ε
    /// on any proper subsample, and rejects s outside 1..=n.
    #[test]
    fn amplified_budget_halves_at_full_sample(
        (n, s) in (1usize..200).prop_flat_map(|n| (Just(n), 1..=n)),
        eps in 1e-3f64..10.0,
        delta in 1e-9f64..0.9,
    ) {
        let budget = PrivacyBudget::new(eps, delta);
        let amplified = subsample_amplified_budget(&budget, n, s).unwrap();
        prop_assert_eq!(amplified.delta().to_bits(), (delta / 2.0).to_bits());
        if s == n {
            prop_assert_eq!(amplified.epsilon().to_bits(), (eps / 2.0).to_bits());
        } else {
            prop_assert!(amplified.epsilon() > eps / 2.0);
        }
        prop_assert!(subsample_amplified_budget(&budget, n, 0).is_err());
        prop_assert!(subsample_amplified_budget(&budget, n, n + 1).is_err());
    }

    /// Samples are sorted, duplicate-free, in range, of the requested size,
    /// and s = n selects every index — the identity that makes full-sample
    /// subsampling coincide bitwise with no subsampling.
    #[test]
    fn sampling_without_replacement_is_sorted_unique_in_range(
        (n, s) in (0usize..64).prop_flat_map(|n| (Just(n), 0..=n)),
        seed in any::<u64>(),
    ) {
        let mut rng = stream(seed, 97, b"prop-sample");
        let sample = sample_without_replacement(&mut rng, n, s);
        prop_assert_eq!(sample.len(), s);
        prop_assert!(sample.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(sample.iter().all(|&i| i < n));
        if s == n {
            prop_assert_eq!(sample, (0..n).collect::<Vec<_>>());
        }
    }
}
