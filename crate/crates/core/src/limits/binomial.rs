//! Fair-coin binomial CDFs with strict thresholds.

use statrs::function::beta::beta_reg;

const DIRECT_LIMIT: u64 = 1000;

/// `P(Bin(t, 1/2) < threshold)`.
pub fn binomial_cdf_below(t: u64, threshold: f64) -> f64 {
    if threshold.is_nan() {
        return f64::NAN;
    }
    // largest integer strictly below the threshold
    let k = threshold.ceil() - 1.0;
    if k < 0.0 {
        return 0.0;
    }
    if k >= t as f64 {
        return 1.0;
    }
    cdf_at_most(t, k as u64)
}

/// `P(Bin(t, 1/2) <= k)` for `k < t`.
fn cdf_at_most(t: u64, k: u64) -> f64 {
    if t > DIRECT_LIMIT {
        return beta_reg((t - k) as f64, (k + 1) as f64, 0.5);
    }
    // by symmetry P(X <= k) = 1 - P(X <= t - k - 1); sum the shorter side
    if 2 * k < t {
        lower_sum(t, k)
    } else {
        1.0 - lower_sum(t, t - k - 1)
    }
}

/// Compensated sum of the pmf over `0..=k`.
fn lower_sum(t: u64, k: u64) -> f64 {
    let mut term = (-(t as f64)).exp2();
    let mut sum = 0.0;
    let mut carry = 0.0;
    for j in 0..=k {
        if j > 0 {
            term *= (t - j + 1) as f64 / j as f64;
        }
        let y = term - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    sum
}

/// `G_{n,x}(t) = P(Bin(t, 1/2) < x sqrt(ln n) + ln n)`.
pub fn g_fn(t: u64, x: f64, n: f64) -> f64 {
    let l = n.ln();
    binomial_cdf_below(t, x * l.sqrt() + l)
}

/// `P(Bin(t - d, 1/2) < l)` when `t >= d`, and 0 otherwise.
pub fn g_tilde_fn(t: u64, d: u64, l: f64) -> f64 {
    if t < d {
        0.0
    } else {
        binomial_cdf_below(t - d, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::normal_cdf;

    #[test]
    fn small_values() {
        assert_eq!(binomial_cdf_below(0, 0.0), 0.0);
        assert_eq!(binomial_cdf_below(0, 0.5), 1.0);
        assert_eq!(binomial_cdf_below(2, 2.0), 0.75);
        assert_eq!(binomial_cdf_below(2, 1.5), 0.75);
        assert_eq!(binomial_cdf_below(3, 2.0), 0.5);
        assert_eq!(g_tilde_fn(5, 2, 2.0), 0.5);
        assert_eq!(g_tilde_fn(1, 2, 2.0), 0.0);
    }

    #[test]
    fn empty_binomial_in_g() {
        // threshold x sqrt(ln n) + ln n; with n = e, x = -1 it is exactly 0
        let e = std::f64::consts::E;
        assert_eq!(g_fn(0, -1.0, e), 0.0);
        assert_eq!(g_fn(0, -0.5, e), 1.0);
    }

    #[test]
    fn matches_exact_rationals() {
        for t in 0..40u64 {
            let mut c = 1u128;
            let mut acc = 0u128;
            for k in 0..=t {
                if k > 0 {
                    c = c * (t - k + 1) as u128 / k as u128;
                }
                acc += c;
                let exact = acc as f64 / (1u128 << t) as f64;
                let got = binomial_cdf_below(t, k as f64 + 1.0);
                assert!((got - exact).abs() < 1e-15, "t={t} k={k}");
            }
        }
    }

    #[test]
    fn both_routes_agree_near_switch() {
        for t in [900u64, 1000] {
            for k in [400u64, 450, 500, 520] {
                let direct = cdf_at_most(t, k);
                let beta = beta_reg((t - k) as f64, (k + 1) as f64, 0.5);
                assert!((direct - beta).abs() < 1e-12, "t={t} k={k}: {direct} vs {beta}");
            }
        }
    }

    #[test]
    fn incomplete_beta_route() {
        // 50-digit value of P(Bin(5000, 1/2) <= 2450)
        let got = binomial_cdf_below(5000, 2451.0);
        // the incomplete beta routine is good to about 1e-11 here
        assert!((got - 0.080_742_611_198_688_443_92).abs() < 1e-10, "{got}");
    }

    #[test]
    fn gaussian_regime() {
        for t in [200u64, 5000, 100_000] {
            let s = (t as f64).sqrt() / 2.0;
            for c in [-1.5, 0.0, 0.7] {
                let theta = t as f64 / 2.0 + c * s;
                let approx = normal_cdf((theta.ceil() - 0.5 - t as f64 / 2.0) / s);
                let exact = binomial_cdf_below(t, theta);
                assert!((approx - exact).abs() < 0.5 / (t as f64).sqrt(), "t={t} c={c}");
            }
        }
    }

    #[test]
    fn monotone() {
        for t in [10u64, 2000] {
            let mut prev = 0.0;
            for k in 0..=t + 1 {
                let v = binomial_cdf_below(t, k as f64);
                assert!(v >= prev - 1e-15);
                prev = v;
            }
            // fewer free trials make the strict bound easier to meet
            for d in 0..t {
                assert!(g_tilde_fn(t, d + 1, 4.0) >= g_tilde_fn(t, d, 4.0) - 1e-15);
            }
            assert!(binomial_cdf_below(t + 1, 4.0) <= binomial_cdf_below(t, 4.0));
        }
    }
}
