//! Goodness-of-fit statistics.

use serde::{Deserialize, Serialize};

use crate::limits::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GofKind {
    Ks,
    TotalVariation,
    ChiSquare,
}

/// A statistic against a reference law, with the threshold it is judged by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub kind: GofKind,
    pub value: f64,
    pub sample_size: u64,
    pub reference: String,
    pub threshold: f64,
}

impl GofReport {
    pub fn passed(&self) -> bool {
        self.value < self.threshold
    }
}

/// One-sample Kolmogorov-Smirnov distance `sup_x |F_n(x) - F(x)|`.
/// Sorts `samples` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_unstable_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < samples.len() {
        let x = samples[i];
        let mut j = i;
        while j < samples.len() && samples[j] == x {
            j += 1;
        }
        let f = cdf(x);
        // the empirical CDF jumps from i/n to j/n at x
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

pub fn ks_normal(samples: &[f64], threshold: f64) -> GofReport {
    let mut s = samples.to_vec();
    GofReport {
        kind: GofKind::Ks,
        value: if s.is_empty() { 1.0 } else { ks_statistic(&mut s, normal_cdf) },
        sample_size: samples.len() as u64,
        reference: "standard normal".into(),
        threshold,
    }
}

/// Total variation between two pmfs on `0..` (missing entries are 0).
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    (0..len).map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs()).sum::<f64>() / 2.0
}

/// Pearson chi-square of observed counts against expected probabilities,
/// pooling cells whose expected count is below 5 into their neighbour.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    let total: u64 = observed.iter().sum();
    let t = total as f64;
    let len = observed.len().max(expected.len());
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for i in 0..len {
        pending.0 += observed.get(i).copied().unwrap_or(0) as f64;
        pending.1 += expected.get(i).copied().unwrap_or(0.0) * t;
        if pending.1 >= 5.0 {
            cells.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 || pending.0 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => cells.push(pending),
        }
    }
    let stat = cells.iter().filter(|c| c.1 > 0.0).map(|(o, e)| (o - e) * (o - e) / e).sum();
    (stat, cells.len().saturating_sub(1))
}

/// Sample Pearson correlation.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_by_hand() {
        // uniform reference on [0,1], samples 0.1 and 0.9
        let mut s = vec![0.9, 0.1];
        let d = ks_statistic(&mut s, |x: f64| x.clamp(0.0, 1.0));
        assert!((d - 0.4).abs() < 1e-15);
        // ties jump together
        let mut s = vec![0.5, 0.5];
        assert!((ks_statistic(&mut s, |x: f64| x) - 0.5).abs() < 1e-15);
        assert_eq!(ks_normal(&[], 0.1).value, 1.0);
    }

    #[test]
    fn ks_is_small_for_normal_quantiles() {
        let n = 2000;
        let s: Vec<f64> = (0..n)
            .map(|i| {
                let p = (i as f64 + 0.5) / n as f64;
                // invert Phi by bisection
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if normal_cdf(mid) < p {
                        lo = mid
                    } else {
                        hi = mid
                    }
                }
                lo
            })
            .collect();
        let r = ks_normal(&s, 0.01);
        assert!(r.value <= 0.5 / n as f64 + 1e-9, "{}", r.value);
        assert!(r.passed());
    }

    #[test]
    fn tv_and_chi_square() {
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!((total_variation(&[1.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
        assert!((total_variation(&[0.2, 0.8], &[0.5, 0.5]) - 0.3).abs() < 1e-15);
        let (stat, dof) = chi_square(&[50, 50], &[0.5, 0.5]);
        assert_eq!((stat, dof), (0.0, 1));
        let (stat, _) = chi_square(&[60, 40], &[0.5, 0.5]);
        assert!((stat - 4.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_extremes() {
        let x = [1.0, 2.0, 3.0];
        assert!((correlation(&x, &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-15);
        assert!((correlation(&x, &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        assert!(correlation(&[1.0], &[1.0]).is_nan());
    }
}
