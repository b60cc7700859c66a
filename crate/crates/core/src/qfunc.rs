//! Standard normal tail probabilities.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `Q(x) = P(Z > x)` for a standard normal `Z`.
///
/// Computed as `erfc(x/√2)/2`, which keeps full relative accuracy in the
/// upper tail and underflows cleanly to 0 past `x ≈ 38.5`.
pub fn q(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `Qᶜ(x) = 1 − Q(x) = Q(−x)`.
pub fn qc(x: f64) -> f64 {
    q(-x)
}

/// Standard normal density.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `P(lower < Z ≤ upper)`; `None` stands for an infinite endpoint.
///
/// Differences are taken on whichever tail keeps both terms small.
pub fn interval_prob(lower: Option<f64>, upper: Option<f64>) -> f64 {
    match (lower, upper) {
        (None, None) => 1.0,
        (None, Some(b)) => qc(b),
        (Some(a), None) => q(a),
        (Some(a), Some(b)) => {
            if a >= b {
                0.0
            } else if a >= 0.0 {
                q(a) - q(b)
            } else if b <= 0.0 {
                q(-b) - q(-a)
            } else {
                1.0 - q(b) - q(-a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_and_tails() {
        assert_eq!(q(0.0), 0.5);
        assert!(q(40.0) < 1e-300);
        assert!((qc(40.0) - 1.0).abs() < 1e-300);
        for x in [-3.0, -0.5, 0.25, 1.0, 7.5] {
            assert!((q(x) + qc(x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn interval_probabilities() {
        assert_eq!(interval_prob(None, None), 1.0);
        assert_eq!(interval_prob(Some(0.0), None), 0.5);
        assert_eq!(interval_prob(None, Some(0.0)), 0.5);
        assert_eq!(interval_prob(Some(1.0), Some(1.0)), 0.0);
        let p = interval_prob(Some(-1.0), Some(1.0));
        assert!((p - (1.0 - 2.0 * q(1.0))).abs() < 1e-15);
        let p = interval_prob(Some(2.0), Some(3.0));
        assert!((p - (q(2.0) - q(3.0))).abs() < 1e-17);
        let p = interval_prob(Some(-3.0), Some(-2.0));
        assert!((p - (q(2.0) - q(3.0))).abs() < 1e-17);
    }
}
