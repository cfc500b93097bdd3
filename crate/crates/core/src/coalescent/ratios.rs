//! One-step selection probabilities for `k` tracked trees.
//!
//! With `m` trees of which `k` hold one tracked vertex each, a uniform merge
//! touches no tracked tree with probability `p0 = (m-k)(m-k-1)/(m(m-1))` and
//! one given tracked tree only with probability `p1 = 2(m-k)/(m(m-1))`. The
//! independent approximations are `q0 = (1-2/m)^k` and
//! `q1 = (2/m)(1-2/m)^(k-1)`. For `m >= k+2` they satisfy
//! `q0 > p0 > q0(1 - c/m^2)` and `q1 < p1 < q1(1 + c/m)`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub fn p0(m: u32, k: u32) -> f64 {
    let (m, k) = (m as f64, k as f64);
    (m - k) * (m - k - 1.0) / (m * (m - 1.0))
}

pub fn p1(m: u32, k: u32) -> f64 {
    let (m, k) = (m as f64, k as f64);
    2.0 * (m - k) / (m * (m - 1.0))
}

pub fn q0(m: u32, k: u32) -> f64 {
    (1.0 - 2.0 / m as f64).powi(k as i32)
}

pub fn q1(m: u32, k: u32) -> f64 {
    2.0 / m as f64 * (1.0 - 2.0 / m as f64).powi(k as i32 - 1)
}

/// Outcome of checking the four inequalities on `m in k+2..=m_max`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioScan {
    pub k: u32,
    pub m_max: u32,
    /// `sup m^2 (1 - p0/q0)` over the range.
    pub sup_lower: f64,
    /// `sup m (p1/q1 - 1)` over the range.
    pub sup_upper: f64,
    /// The constant used, as `c_num / c_den`.
    pub c_num: i128,
    pub c_den: i128,
    /// First `m` at which an inequality fails, if any.
    pub violation: Option<u32>,
}

impl RatioScan {
    pub fn c(&self) -> f64 {
        self.c_num as f64 / self.c_den as f64
    }

    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Integer numerators and denominators, scaled by a common positive factor:
/// `1 - p0/q0 = a0/b0` and `p1/q1 - 1 = a1/b1`.
fn gaps(m: i128, k: u32) -> Option<(i128, i128, i128, i128)> {
    let pow = |x: i128, e: u32| x.checked_pow(e);
    let b0 = pow(m - 2, k)?.checked_mul(m - 1)?;
    let a0 = b0.checked_sub((m - k as i128) * (m - k as i128 - 1) * pow(m, k - 1)?)?;
    let b1 = (m - 1).checked_mul(pow(m - 2, k - 1)?)?;
    let a1 = (m - k as i128).checked_mul(pow(m, k - 1)?)?.checked_sub(b1)?;
    Some((a0, b0, a1, b1))
}

const C_DEN: i128 = 1_000_000;

/// Finds the smallest multiple of `1e-6` above the supremum in exact integer
/// arithmetic, then verifies all four inequalities with it. The floating
/// point suprema are reported alongside.
pub fn scan_pm01(k: u32, m_max: u32) -> Result<RatioScan> {
    if k < 1 {
        return invalid("k must be at least 1");
    }
    if m_max < k + 2 {
        return invalid(format!("m_max = {m_max} is below k + 2 = {}", k + 2));
    }
    let overflow = |m: u32| Error::NumericFailure {
        routine: "scan_pm01",
        detail: format!("integer overflow at m = {m}, k = {k}"),
    };
    let mut sup_lower = f64::MIN;
    let mut sup_upper = f64::MIN;
    let mut c_num = 1;
    for m in k + 2..=m_max {
        let (a0, b0, a1, b1) = gaps(m as i128, k).ok_or_else(|| overflow(m))?;
        let mi = m as i128;
        let mf = m as f64;
        sup_lower = sup_lower.max(mf * mf * (a0 as f64 / b0 as f64));
        sup_upper = sup_upper.max(mf * (a1 as f64 / b1 as f64));
        // smallest multiple of 1e-6 strictly above both scaled gaps
        let lo = (mi * mi * C_DEN).checked_mul(a0).ok_or_else(|| overflow(m))?.div_euclid(b0);
        let hi = (mi * C_DEN).checked_mul(a1).ok_or_else(|| overflow(m))?.div_euclid(b1);
        c_num = c_num.max(lo.max(hi) + 1);
    }

    let mut violation = None;
    for m in k + 2..=m_max {
        let (a0, b0, a1, b1) = gaps(m as i128, k).ok_or_else(|| overflow(m))?;
        let mi = m as i128;
        // q0 > p0 and p1 > q1
        let strict = a0 > 0 && a1 > 0;
        // m^2 a0/b0 < c and m a1/b1 < c
        let lower = (mi * mi * C_DEN).checked_mul(a0).ok_or_else(|| overflow(m))?
            < c_num.checked_mul(b0).ok_or_else(|| overflow(m))?;
        let upper = (mi * C_DEN).checked_mul(a1).ok_or_else(|| overflow(m))?
            < c_num.checked_mul(b1).ok_or_else(|| overflow(m))?;
        if !(strict && lower && upper) {
            violation = Some(m);
            break;
        }
    }
    Ok(RatioScan { k, m_max, sup_lower, sup_upper, c_num, c_den: C_DEN, violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_at_small_m() {
        // m = 4, k = 2: pairs avoiding both tracked trees: 1 of 6
        assert!((p0(4, 2) - 1.0 / 6.0).abs() < 1e-15);
        // pairs touching tree 1 but not tree 2: 2 of 6
        assert!((p1(4, 2) - 2.0 / 6.0).abs() < 1e-15);
        assert!((q0(4, 2) - 0.25).abs() < 1e-15);
        assert!((q1(4, 2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn integer_gaps_match_floating_point() {
        for k in 2..=4 {
            for m in [k + 2, 10, 1000] {
                let (a0, b0, a1, b1) = gaps(m as i128, k).unwrap();
                let g0 = 1.0 - p0(m, k) / q0(m, k);
                let g1 = p1(m, k) / q1(m, k) - 1.0;
                assert!((a0 as f64 / b0 as f64 - g0).abs() < 1e-12);
                assert!((a1 as f64 / b1 as f64 - g1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_scan_holds() {
        let s = scan_pm01(3, 5000).unwrap();
        assert!(s.holds());
        assert!(s.c() >= s.sup_lower && s.c() >= s.sup_upper);
        assert!(s.c() - s.sup_lower.max(s.sup_upper) <= 1.1e-6);
        // the supremum 23.85 is attained at m = 6 and is a multiple of 1e-6
        let s = scan_pm01(4, 100).unwrap();
        assert!(s.holds());
        assert_eq!(s.c_num, 23_850_001);
    }

    #[test]
    fn rejects_empty_range() {
        assert!(scan_pm01(4, 5).is_err());
    }
}
