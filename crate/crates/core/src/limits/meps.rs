//! Limiting law of the number of vertices of maximum degree:
//! `P(M_eps = k) = sum_{m in Z} exp(-2^(-m+eps)) 2^(-(m+1-eps) k) / k!`.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Truncated value of `P(M_eps = k)` with a bound on the omitted terms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MEpsTerm {
    pub k: u32,
    pub epsilon: f64,
    pub trunc: u32,
    pub value: f64,
    pub tail_bound: f64,
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Sum of the terms with index `m` in `lo..=hi`, in increasing `m`.
///
/// Each term depends on `m` and `eps` only through `s = m - eps`, so
/// `(eps = 1, m)` and `(eps = 0, m - 1)` give bitwise identical terms.
pub fn m_eps_partial_sum(k: u32, epsilon: f64, lo: i32, hi: i32) -> f64 {
    let lnk = ln_factorial(k);
    let mut sum = 0.0;
    let mut carry = 0.0;
    for m in lo..=hi {
        let s = m as f64 - epsilon;
        let log_term = -(-s).exp2() - (s + 1.0) * k as f64 * std::f64::consts::LN_2 - lnk;
        let y = log_term.exp() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `P(M_eps = k)` over `m in [-trunc, trunc]`.
pub fn m_eps_pmf(k: u32, epsilon: f64, trunc: u32) -> Result<MEpsTerm> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("epsilon {epsilon} outside [0, 1]"));
    }
    if trunc == 0 || trunc > 1000 {
        return invalid(format!("trunc {trunc} outside 1..=1000"));
    }
    let t = trunc as i32;
    let value = m_eps_partial_sum(k, epsilon, -t, t);
    Ok(MEpsTerm { k, epsilon, trunc, value, tail_bound: tail_bound(k, epsilon, trunc) })
}

/// Bound on the terms with `|m| > trunc`.
fn tail_bound(k: u32, epsilon: f64, trunc: u32) -> f64 {
    let kf = k as f64;
    let t = trunc as f64;
    // m > trunc: drop the exponential factor, geometric series with ratio 2^-k
    let upper = (-(t + 2.0 - epsilon) * kf).exp2() / (1.0 - (-kf).exp2()) / ln_factorial(k).exp();
    // m < -trunc: with x = 2^(-m+eps), each term is exp(-x)(x/2)^k/k! and x
    // doubles as m decreases; once x >= (k+1) ln 2 successive terms at least
    // halve, so the sum is at most twice the first
    let x0 = (t + 1.0 + epsilon).exp2();
    let lower = if x0 >= (kf + 1.0) * std::f64::consts::LN_2 {
        2.0 * (-x0 + kf * (x0 / 2.0).ln() - ln_factorial(k)).exp()
    } else {
        f64::INFINITY
    };
    upper + lower
}

/// `sum_{k=1}^{k_max} P(M_eps = k)` at the given truncation.
pub fn m_eps_total(epsilon: f64, trunc: u32, k_max: u32) -> Result<f64> {
    let mut total = 0.0;
    for k in 1..=k_max {
        total += m_eps_pmf(k, epsilon, trunc)?.value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_with_small_bounds() {
        for k in 1..30 {
            let p = m_eps_pmf(k, 0.5, 60).unwrap();
            assert!(p.value > 0.0);
            assert!(p.tail_bound < 1e-15);
        }
        assert!(m_eps_pmf(1, 0.0, 2).unwrap().tail_bound > 1e-4);
    }

    #[test]
    fn normalized() {
        for eps in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let total = m_eps_total(eps, 60, 400).unwrap();
            assert!((total - 1.0).abs() < 1e-10, "eps={eps}: {total}");
        }
    }

    #[test]
    fn golden_values() {
        // 50-digit summations of the same truncated series
        let cases = [
            (1, 0.0, 0.721_352_103_336_861_969_4),
            (2, 0.5, 0.180_323_356_075_800_874_0),
            (3, 0.0, 0.060_103_173_989_159_972_48),
        ];
        for (k, eps, want) in cases {
            let got = m_eps_pmf(k, eps, 60).unwrap().value;
            assert!((got - want).abs() < 1e-15 * want, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn lattice_shift_is_bitwise() {
        for k in 1..20 {
            assert_eq!(m_eps_partial_sum(k, 1.0, -60, 60), m_eps_partial_sum(k, 0.0, -61, 59));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(m_eps_pmf(0, 0.0, 60).is_err());
        assert!(m_eps_pmf(1, -0.1, 60).is_err());
        assert!(m_eps_pmf(1, 0.0, 0).is_err());
    }
}
