//! Adaptive Gauss-Kronrod quadrature and the Gaussian smoothing identity
//! `E[Phi((sqrt(1 + b^2) x - N) / b)] = Phi(x)` for standard Gaussian `N`.

use serde::Serialize;

use super::{normal_cdf, normal_pdf};
use crate::error::{invalid, Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights; every other
// abscissa, starting from index 1, is a 7-point Gauss node.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_INTERVALS: usize = 2000;

/// Integral estimate with its error estimate and work count.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` by bisecting the worst subinterval until the
/// summed error estimate is below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a < b) || tol <= 0.0 {
        return invalid(format!("bad integration request [{a}, {b}] with tolerance {tol}"));
    }
    let mut parts = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::NumericFailure { routine: "integrate", detail: "non-finite integrand".into() });
        }
        if error <= tol {
            return Ok(Quadrature { value, error, intervals: parts.len() });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NumericFailure {
                routine: "integrate",
                detail: format!("error estimate {error:e} above {tol:e} after {} subintervals", parts.len()),
            });
        }
        let worst = (0..parts.len()).max_by(|&i, &j| parts[i].3.total_cmp(&parts[j].3)).unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (l, r) in [(lo, mid), (mid, hi)] {
            let (v, e) = gk15(&f, l, r);
            parts.push((l, r, v, e));
        }
    }
}

/// Both sides of the smoothing identity at `(x, b)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntbCheck {
    pub x: f64,
    pub b: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub quadrature_error: f64,
}

/// Half-width of the integration window; the Gaussian mass outside is below 1e-23.
const WINDOW: f64 = 10.0;

pub fn intb_check(x: f64, b: f64) -> Result<IntbCheck> {
    if !(b > 0.0 && b.is_finite()) || !x.is_finite() {
        return invalid(format!("need finite x and b > 0, got x = {x}, b = {b}"));
    }
    let shift = (1.0 + b * b).sqrt() * x;
    let q = integrate(|z| normal_pdf(z) * normal_cdf((shift - z) / b), -WINDOW, WINDOW, 1e-13)?;
    let rhs = normal_cdf(x);
    Ok(IntbCheck { x, b, lhs: q.value, rhs, residual: (q.value - rhs).abs(), quadrature_error: q.error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-14).unwrap();
        assert!((q.value - (10.5 - 9.0 + 3.0)).abs() < 1e-13);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn gaussian_mass() {
        let q = integrate(normal_pdf, -WINDOW, WINDOW, 1e-14).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_point() {
        for b in [0.1, 1.0, 7.0] {
            let c = intb_check(0.0, b).unwrap();
            assert!((c.lhs - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn named_points() {
        assert!(intb_check(1.0, 1.0).unwrap().residual < 1e-8);
        assert!(intb_check(-2.0, 0.5).unwrap().residual < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(intb_check(0.0, 0.0).is_err());
        assert!(intb_check(f64::NAN, 1.0).is_err());
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(matches!(integrate(|x| 1.0 / x, -1.0, 1.0, 1e-12), Err(Error::NumericFailure { .. })));
    }
}
