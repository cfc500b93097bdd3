//! Canonical finite-dimensional test families for the marked point process
//! of high degrees, and their Poisson limits.
//!
//! Text form: comma-separated entries `j:interval`, where tail entries are
//! prefixed with `>=` and intervals are `(a,b]`, `(-inf,b]`, `(a,inf)` or
//! `(-inf,inf)`. Example: `0:(-inf,0],1:(0,inf),>=2:(-inf,inf)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{normal_cdf, normal_sf};
use crate::error::{invalid, Error, Result};

/// Interval `(lo, hi]`, or `(lo, inf)` when `hi` is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY || lo >= hi {
            return invalid(format!("({lo}, {hi}] is not a nonempty interval"));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, z: f64) -> bool {
        z > self.lo && z <= self.hi
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }

    /// Standard Gaussian mass of the interval.
    pub fn normal_mass(&self) -> f64 {
        if self.lo >= 0.0 {
            normal_sf(self.lo) - normal_sf(self.hi)
        } else {
            normal_cdf(self.hi) - normal_cdf(self.lo)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = if self.lo.is_infinite() { "-inf".to_string() } else { self.lo.to_string() };
        if self.hi.is_infinite() {
            write!(f, "({lo},inf)")
        } else {
            write!(f, "({lo},{}]", self.hi)
        }
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("malformed interval {s:?}"));
        let body = s.strip_prefix('(').ok_or_else(bad)?;
        let (body, closed) = if let Some(b) = body.strip_suffix(']') {
            (b, true)
        } else {
            (body.strip_suffix(')').ok_or_else(bad)?, false)
        };
        let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
        let parse = |t: &str| -> Result<f64> {
            match t.trim() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" | "+inf" => Ok(f64::INFINITY),
                v => v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad),
            }
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(bad());
        }
        // finite right ends are closed, infinite ones open
        if closed == hi.is_infinite() {
            return Err(bad());
        }
        Interval::new(lo, hi)
    }
}

/// One `(level, interval)` pair; `tail` selects degree at least the level
/// rather than exactly the level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FddEntry {
    pub level: i32,
    pub interval: Interval,
    pub tail: bool,
}

impl fmt::Display for FddEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.tail { ">=" } else { "" };
        write!(f, "{prefix}{}:{}", self.level, self.interval)
    }
}

/// Exact-level entries with nondecreasing levels, followed by tail entries
/// sharing one level above all exact levels. Entries at a common level have
/// pairwise disjoint intervals. Either group may be empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFdd {
    entries: Vec<FddEntry>,
}

impl CanonicalFdd {
    pub fn new(entries: Vec<FddEntry>) -> Result<Self> {
        if entries.is_empty() {
            return invalid("empty FDD sequence");
        }
        let k_prime = entries.iter().take_while(|e| !e.tail).count();
        let (exact, tail) = entries.split_at(k_prime);
        if tail.iter().any(|e| !e.tail) {
            return invalid("exact entries must precede tail entries");
        }
        if exact.windows(2).any(|w| w[0].level > w[1].level) {
            return invalid("exact levels must be nondecreasing");
        }
        if let Some(t) = tail.first() {
            if tail.iter().any(|e| e.level != t.level) {
                return invalid("tail entries must share one level");
            }
            if exact.last().is_some_and(|e| e.level >= t.level) {
                return invalid("tail level must exceed every exact level");
            }
        }
        for group in [exact, tail] {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    if a.level == b.level && !a.interval.disjoint(&b.interval) {
                        return invalid(format!(
                            "overlapping intervals at level {}: {} and {}",
                            a.level, a.interval, b.interval
                        ));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[FddEntry] {
        &self.entries
    }

    /// Number of exact-level entries.
    pub fn k_prime(&self) -> usize {
        self.entries.iter().filter(|e| !e.tail).count()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for CanonicalFdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalFdd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        let entries = parts
            .into_iter()
            .map(|p| {
                let p = p.trim();
                let (tail, rest) = match p.strip_prefix(">=") {
                    Some(r) => (true, r),
                    None => (false, p),
                };
                let (level, interval) =
                    rest.split_once(':').ok_or_else(|| Error::InvalidArgument(format!("entry {p:?} lacks a level")))?;
                let level =
                    level.trim().parse::<i32>().map_err(|_| Error::InvalidArgument(format!("bad level in {p:?}")))?;
                Ok(FddEntry { level, interval: interval.parse()?, tail })
            })
            .collect::<Result<Vec<_>>>()?;
        CanonicalFdd::new(entries)
    }
}

/// Limiting Poisson means of the counts in a canonical sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPrediction {
    pub epsilon: f64,
    pub poisson_means: Vec<f64>,
}

/// Exact entries: `2^(-j + eps - 1) Phi(B)`; tail entries: `2^(-j + eps) Phi(B)`.
pub fn poisson_means(fdd: &CanonicalFdd, epsilon: f64) -> Result<LimitPrediction> {
    check_epsilon(epsilon)?;
    let poisson_means = fdd.entries.iter().map(|e| entry_mean(e, epsilon)).collect();
    Ok(LimitPrediction { epsilon, poisson_means })
}

fn entry_mean(e: &FddEntry, epsilon: f64) -> f64 {
    let shift = if e.tail { 0.0 } else { -1.0 };
    (-(e.level as f64) + epsilon + shift).exp2() * e.interval.normal_mass()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("epsilon {epsilon} outside [0, 1]"));
    }
    Ok(())
}

/// Limiting joint factorial moment `E prod_k (X_k)_{a_k}`, i.e. the product
/// of the Poisson means raised to the exponents.
pub fn factorial_moment_prediction(fdd: &CanonicalFdd, exponents: &[u32], epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if exponents.len() != fdd.len() {
        return invalid(format!("{} exponents for {} entries", exponents.len(), fdd.len()));
    }
    if exponents.iter().all(|&a| a == 0) {
        return invalid("exponents must not all be zero");
    }
    Ok(fdd.entries.iter().zip(exponents).map(|(e, &a)| entry_mean(e, epsilon).powi(a as i32)).product())
}
