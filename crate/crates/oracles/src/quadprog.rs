//! Projected gradient descent on the ℓ₂ ball, as an independent check for
//! the closed-form trust-region solver.
//!
//! Minimizes Σᵢ λᵢxᵢ² − βᵢxᵢ over ‖x‖ ≤ r by gradient steps of fixed size
//! 1/(2λmax + 2) followed by radial projection. The objective is smooth and
//! convex for λ ≥ 0, so with enough iterations PGD lands within any fixed
//! tolerance of the optimum; it shares no code with the secular-equation
//! path being tested.

/// Objective value Σᵢ λᵢxᵢ² − βᵢxᵢ.
pub fn quadratic_objective(lambda: &[f64], beta: &[f64], x: &[f64]) -> f64 {
    assert_eq!(lambda.len(), beta.len());
    assert_eq!(lambda.len(), x.len());
    x.iter()
        .zip(lambda.iter().zip(beta))
        .map(|(&xi, (&li, &bi))| li * xi * xi - bi * xi)
        .sum()
}

/// Projected gradient descent from the origin. Returns the iterate after
/// `iterations` steps.
pub fn pgd_quadratic_ball(lambda: &[f64], beta: &[f64], radius: f64, iterations: usize) -> Vec<f64> {
    assert_eq!(lambda.len(), beta.len());
    assert!(radius >= 0.0);
    let lam_max = lambda.iter().fold(0.0f64, |a, &b| a.max(b));
    let step = 1.0 / (2.0 * lam_max + 2.0);
    let mut x = vec![0.0f64; lambda.len()];
    for _ in 0..iterations {
        for i in 0..x.len() {
            x[i] -= step * (2.0 * lambda[i] * x[i] - beta[i]);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            let scale = radius / norm;
            for v in x.iter_mut() {
                *v *= scale;
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_quadratic_reaches_closed_form() {
        // min 2x² − 4x on a huge ball: x* = 1.
        let x = pgd_quadratic_ball(&[2.0], &[4.0], 1e6, 10_000);
        assert!((x[0] - 1.0).abs() < 1e-10, "x = {x:?}");
    }

    #[test]
    fn linear_objective_pushes_to_the_boundary() {
        // min −3x over |x| ≤ 2: x* = 2.
        let x = pgd_quadratic_ball(&[0.0], &[3.0], 2.0, 10_000);
        assert!((x[0] - 2.0).abs() < 1e-9, "x = {x:?}");
    }

    #[test]
    fn objective_helper_evaluates_sum() {
        let f = quadratic_objective(&[1.0, 2.0], &[1.0, 0.0], &[2.0, 3.0]);
        assert_eq!(f, 4.0 - 2.0 + 18.0);
    }
}
