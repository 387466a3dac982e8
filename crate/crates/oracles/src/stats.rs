//! Statistical helpers for calibration tests: the standard normal CDF and the
//! Kolmogorov–Smirnov distance.

/// Standard normal CDF via the error function.
pub fn normal_cdf(x: f64, sigma: f64) -> f64 {
    assert!(sigma > 0.0);
    0.5 * (1.0 + libm::erf(x / (sigma * core::f64::consts::SQRT_2)))
}

/// Two-sided Kolmogorov–Smirnov statistic of `samples` against `N(0, σ²)`.
pub fn ks_statistic_normal(samples: &[f64], sigma: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf(x, sigma);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

/// KS critical value at significance `alpha` for sample size `n`
/// (asymptotic form `c(α)/√n`, `c(α) = √(−ln(α/2)/2)`).
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    ((-((alpha / 2.0).ln())) / 2.0).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_known_points() {
        assert!((normal_cdf(0.0, 1.0) - 0.5).abs() < 1e-12);
        assert!((normal_cdf(1.96, 1.0) - 0.975).abs() < 1e-3);
        assert!((normal_cdf(-1.96, 1.0) - 0.025).abs() < 1e-3);
        // Scale invariance: P(X <= 2σ) is the same for every σ.
        assert!((normal_cdf(2.0, 1.0) - normal_cdf(6.0, 3.0)).abs() < 1e-12);
    }

    #[test]
    fn ks_detects_wrong_scale_and_accepts_right_scale() {
        // Deterministic "samples" from inverse-CDF-ish stratification of a
        // unit normal: quantile midpoints via binary search on the CDF.
        let n = 2000;
        let mut samples = Vec::with_capacity(n);
        for i in 0..n {
            let target = (i as f64 + 0.5) / n as f64;
            let mut lo = -10.0;
            let mut hi = 10.0;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if normal_cdf(mid, 1.0) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            samples.push(0.5 * (lo + hi));
        }
        let crit = ks_critical(0.001, n);
        assert!(ks_statistic_normal(&samples, 1.0) < crit);
        assert!(ks_statistic_normal(&samples, 1.5) > crit);
    }

    #[test]
    fn critical_value_matches_table() {
        // Known asymptotic value: c(0.05) ≈ 1.358.
        let c = ks_critical(0.05, 1) * 1.0f64;
        assert!((c - 1.358).abs() < 1e-2);
    }
}
