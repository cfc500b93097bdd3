//! Closed-form limiting quantities for degrees and depths.

mod binomial;
mod fdd;
mod meps;
mod quadrature;

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use binomial::{binomial_cdf_below, g_fn, g_tilde_fn};
pub use fdd::{factorial_moment_prediction, poisson_means, CanonicalFdd, FddEntry, Interval, LimitPrediction};
pub use meps::{m_eps_partial_sum, m_eps_pmf, m_eps_total, MEpsTerm};
pub use quadrature::{intb_check, integrate, IntbCheck, Quadrature};

/// `log2(e)`.
pub const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Standard Gaussian CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard Gaussian upper tail `1 - Phi(x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Standard Gaussian density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Centring and scaling constants for the depth of a vertex whose degree is
/// at least `a log2 n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub a: f64,
    pub mu_a: f64,
    pub sigma2_a: f64,
}

pub fn limit_params(a: f64) -> Result<LimitParams> {
    if !(0.0..=1.0).contains(&a) {
        return invalid(format!("degree fraction {a} outside [0, 1]"));
    }
    Ok(LimitParams { a, mu_a: 1.0 - a * LOG2_E / 2.0, sigma2_a: 1.0 - a * LOG2_E / 4.0 })
}

impl LimitParams {
    /// `(h - mu_a ln n) / sqrt(sigma2_a ln n)`.
    pub fn normalize(&self, depth: f64, n: f64) -> f64 {
        let l = n.ln();
        (depth - self.mu_a * l) / (self.sigma2_a * l).sqrt()
    }
}

/// Intensity `2^-x ln 2` of the limiting point process of degrees.
pub fn ppp_intensity(x: f64) -> f64 {
    (-x).exp2() * std::f64::consts::LN_2
}

/// `int_j^inf 2^-x ln 2 dx = 2^-j`.
pub fn ppp_tail_mass(j: f64) -> f64 {
    (-j).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params() {
        let p = limit_params(0.0).unwrap();
        assert_eq!((p.mu_a, p.sigma2_a), (1.0, 1.0));
        let p = limit_params(1.0).unwrap();
        assert!((p.mu_a - 0.2786525).abs() < 5e-8);
        assert!((p.sigma2_a - 0.6393262).abs() < 5e-8);
        for a in [0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            let p = limit_params(a).unwrap();
            assert!((2.0 * p.sigma2_a - p.mu_a - 1.0).abs() < 1e-15);
        }
        assert!(limit_params(-0.1).is_err());
        assert!(limit_params(1.5).is_err());
        assert!(limit_params(f64::NAN).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn intensity() {
        assert!((ppp_intensity(0.0) - 0.693147).abs() < 1e-6);
        assert_eq!(ppp_tail_mass(3.0), 0.125);
        let total = integrate(ppp_intensity, 0.0, 80.0, 1e-14).unwrap();
        assert!((total.value - 1.0).abs() < 1e-12);
        let tail = integrate(ppp_intensity, 3.0, 80.0, 1e-14).unwrap();
        assert!((tail.value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn gaussian() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((normal_sf(5.0) - 2.866_515_718_791_939e-7).abs() < 1e-20);
        assert!((normal_cdf(-1.0) + normal_cdf(1.0) - 1.0).abs() < 1e-16);
    }
}
