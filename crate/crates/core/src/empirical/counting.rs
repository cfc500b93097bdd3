//! Counting measures of high-degree vertices marked by normalized depth.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::limits::{CanonicalFdd, LimitParams, LOG2_E};
use crate::tree::{Label, RecursiveTree};

/// `floor(log2 n)`.
pub fn floor_log2(n: u32) -> u32 {
    31 - n.max(1).leading_zeros()
}

/// `log2 n - floor(log2 n)`.
pub fn lattice_offset(n: u32) -> f64 {
    (n as f64).log2() - floor_log2(n) as f64
}

/// Depth normalized with the constants of maximal degrees:
/// `(h - mu ln n) / sqrt(sigma^2 ln n)` with `mu = 1 - log2(e)/2`.
/// The one-vertex tree is mapped to 0.
pub fn normalized_max_depth(depth: u32, n: u32) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let params = LimitParams { a: 1.0, mu_a: 1.0 - LOG2_E / 2.0, sigma2_a: 1.0 - LOG2_E / 4.0 };
    params.normalize(depth as f64, n as f64)
}

/// Counts of one tree over a canonical sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingMeasureSample {
    pub n: u32,
    pub epsilon_n: f64,
    /// Vertices with degree exactly `floor(log2 n) + j` and mark in `B`.
    pub exact_counts: Vec<u64>,
    /// Vertices with degree at least `floor(log2 n) + j` and mark in `B`.
    pub tail_counts: Vec<u64>,
    /// Vertices with degree below the lowest level of the sequence.
    pub underflow: u64,
}

impl CountingMeasureSample {
    /// Counts in entry order (exact entries first).
    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.exact_counts.iter().chain(&self.tail_counts).copied()
    }
}

/// Degree of entry level `j` at size `n`, or `None` if it is negative.
fn degree_of_level(n: u32, level: i32) -> Option<u32> {
    u32::try_from(floor_log2(n) as i64 + level as i64).ok()
}

/// Counts from a degree array (slot 0 ignored); `depth_of` is only called
/// for vertices whose degree reaches the lowest level of `fdd`.
pub fn count_measures_from<D: FnMut(Label) -> u32>(
    n: u32,
    degrees: &[u32],
    mut depth_of: D,
    fdd: &CanonicalFdd,
) -> CountingMeasureSample {
    let floor = lowest_degree(n, fdd);
    let marked: Vec<(u32, f64)> = degrees
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &d)| d >= floor)
        .map(|(v, &d)| (d, normalized_max_depth(depth_of(v as Label), n)))
        .collect();
    count_marked(n, &marked, fdd)
}

/// Smallest degree counted by `fdd` at size `n`.
pub(crate) fn lowest_degree(n: u32, fdd: &CanonicalFdd) -> u32 {
    let min_level = fdd.entries().iter().map(|e| e.level).min().unwrap_or(0);
    degree_of_level(n, min_level).unwrap_or(0)
}

/// Counts from `(degree, normalized depth)` pairs, which must include every
/// vertex of degree at least [`lowest_degree`]; the other vertices of the
/// `n` are underflow.
pub(crate) fn count_marked(n: u32, marked: &[(u32, f64)], fdd: &CanonicalFdd) -> CountingMeasureSample {
    let entries = fdd.entries();
    let floor = lowest_degree(n, fdd);
    let base = floor_log2(n) as i64;
    let mut counts = vec![0u64; entries.len()];
    let mut counted = 0;
    for &(d, z) in marked.iter().filter(|m| m.0 >= floor) {
        counted += 1;
        for (i, e) in entries.iter().enumerate() {
            let target = base + e.level as i64;
            let hit = if e.tail { d as i64 >= target } else { d as i64 == target };
            if hit && e.interval.contains(z) {
                counts[i] += 1;
            }
        }
    }
    let tail_counts = counts.split_off(fdd.k_prime());
    CountingMeasureSample {
        n,
        epsilon_n: lattice_offset(n),
        exact_counts: counts,
        tail_counts,
        underflow: n as u64 - counted,
    }
}

pub fn count_measures(tree: &RecursiveTree, fdd: &CanonicalFdd) -> CountingMeasureSample {
    count_measures_from(tree.n(), &tree.degrees(), |v| tree.depth_of(v), fdd)
}

/// `(x)_a = x (x-1) ... (x-a+1)`.
pub fn falling_factorial(x: u64, a: u32) -> f64 {
    (0..a as u64).map(|i| x as f64 - i as f64).product()
}

/// Replicate average of `prod_k (X_k)_{a_k}`.
pub fn factorial_moment_estimate(samples: &[CountingMeasureSample], exponents: &[u32]) -> Result<f64> {
    if samples.is_empty() {
        return invalid("no samples");
    }
    if exponents.iter().all(|&a| a == 0) {
        return invalid("exponents must not all be zero");
    }
    let mut total = 0.0;
    for s in samples {
        let len = s.exact_counts.len() + s.tail_counts.len();
        if len != exponents.len() {
            return invalid(format!("{} exponents for {len} counts", exponents.len()));
        }
        total += s.counts().zip(exponents).map(|(x, &a)| falling_factorial(x, a)).product::<f64>();
    }
    Ok(total / samples.len() as f64)
}
