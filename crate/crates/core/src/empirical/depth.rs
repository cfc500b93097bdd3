//! Depth experiments on the coalescent, built on the tracked-vertex sampler.

use std::collections::BTreeMap;

use serde::Serialize;

use super::gof::{correlation, ks_normal, total_variation, GofReport};
use super::run_chunked;
use crate::coalescent::{default_cutoff, TrackedCoalescent};
use crate::error::{invalid, Result};
use crate::limits::{limit_params, LimitParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedDepthSample {
    pub raw_depth: u32,
    pub a: f64,
    pub z: f64,
}

/// Rejection experiment: track vertices `1..=k`, keep chains where vertex
/// `i` has degree at least `floor(a_i log2 n) + b_i`.
#[derive(Debug, Clone, Serialize)]
pub struct CondDepthConfig {
    pub n: u32,
    pub a: Vec<f64>,
    pub b: Vec<i32>,
    /// Stop once this many chains are kept.
    pub target_retained: usize,
    /// Stop after this many chains in any case.
    pub max_attempts: u64,
    /// Fewer kept chains than this marks the run underpowered.
    pub min_retained: usize,
    pub seed: u64,
    /// Attempts per work unit; part of the reproducibility contract.
    pub chunk: u64,
    pub ks_threshold: f64,
}

impl CondDepthConfig {
    pub fn new(n: u32, a: Vec<f64>, b: Vec<i32>, seed: u64) -> Self {
        Self {
            n,
            a,
            b,
            target_retained: usize::MAX,
            max_attempts: 100_000,
            min_retained: 100,
            seed,
            chunk: 1 << 14,
            ks_threshold: 0.05,
        }
    }

    /// `max(0, floor(a_i log2 n) + b_i)`.
    pub fn thresholds(&self) -> Vec<u32> {
        let l = (self.n as f64).log2();
        self.a.iter().zip(&self.b).map(|(&a, &b)| ((a * l).floor() as i64 + b as i64).max(0) as u32).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CondDepthResult {
    pub n: u32,
    pub thresholds: Vec<u32>,
    pub attempts: u64,
    pub retained: usize,
    pub acceptance_rate: f64,
    /// `acceptance_rate * 2^(sum of thresholds)`.
    pub scaled_acceptance: f64,
    /// `samples[i]` holds the kept normalized depths of vertex `i + 1`.
    pub samples: Vec<Vec<NormalizedDepthSample>>,
    pub ks: Vec<GofReport>,
    /// `(i, j, r)`: sample correlation of coordinates `i < j`.
    pub correlations: Vec<(usize, usize, f64)>,
    pub underpowered: bool,
}

pub fn conditional_depth_experiment(cfg: &CondDepthConfig) -> Result<CondDepthResult> {
    let k = cfg.a.len();
    if k == 0 || cfg.b.len() != k {
        return invalid(format!("need matching nonempty a and b, got {} and {}", k, cfg.b.len()));
    }
    if cfg.n < 2 || (k as u32) > cfg.n {
        return invalid(format!("cannot track {k} vertices of n = {}", cfg.n));
    }
    let params: Vec<LimitParams> = cfg.a.iter().map(|&a| limit_params(a)).collect::<Result<_>>()?;
    let thresholds = cfg.thresholds();
    let n = cfg.n;
    let run = run_chunked(
        cfg.seed,
        cfg.chunk,
        cfg.max_attempts,
        cfg.target_retained,
        || TrackedCoalescent::new(n, k, default_cutoff(n)).expect("validated sizes"),
        |s, rng, out: &mut Vec<Vec<u32>>| {
            if s.sample(rng, &thresholds) {
                out.push((0..k).map(|t| s.outcome(t).depth).collect());
            }
        },
    );
    let samples: Vec<Vec<NormalizedDepthSample>> = (0..k)
        .map(|i| {
            run.kept
                .iter()
                .map(|d| NormalizedDepthSample {
                    raw_depth: d[i],
                    a: params[i].a,
                    z: params[i].normalize(d[i] as f64, n as f64),
                })
                .collect()
        })
        .collect();
    let z: Vec<Vec<f64>> = samples.iter().map(|s| s.iter().map(|x| x.z).collect()).collect();
    let ks = z.iter().map(|zi| ks_normal(zi, cfg.ks_threshold)).collect();
    let mut correlations = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            correlations.push((i, j, correlation(&z[i], &z[j])));
        }
    }
    let retained = run.kept.len();
    let acceptance_rate = retained as f64 / run.attempts.max(1) as f64;
    let exponent: u32 = thresholds.iter().sum();
    Ok(CondDepthResult {
        n,
        scaled_acceptance: acceptance_rate * (exponent as f64).exp2(),
        thresholds,
        attempts: run.attempts,
        retained,
        acceptance_rate,
        samples,
        ks,
        correlations,
        underpowered: retained < cfg.min_retained,
    })
}

/// Frequency of `d_n(1) >= m`, scaled by `2^m`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeTailResult {
    pub n: u32,
    pub m: u32,
    pub attempts: u64,
    pub hits: u64,
    pub scaled: f64,
    pub scaled_stderr: f64,
}

pub fn degree_tail_experiment(n: u32, m: u32, attempts: u64, seed: u64) -> Result<DegreeTailResult> {
    if n < 2 || attempts == 0 {
        return invalid("need n >= 2 and a positive number of attempts");
    }
    let run = run_chunked(
        seed,
        1 << 16,
        attempts,
        usize::MAX,
        || TrackedCoalescent::new(n, 1, 0).expect("n >= 2"),
        |s, rng, out: &mut Vec<()>| {
            if s.sample(rng, &[m]) {
                out.push(());
            }
        },
    );
    let hits = run.kept.len() as u64;
    let p = hits as f64 / run.attempts as f64;
    let scale = (m as f64).exp2();
    Ok(DegreeTailResult {
        n,
        m,
        attempts: run.attempts,
        hits,
        scaled: p * scale,
        scaled_stderr: (p * (1.0 - p) / run.attempts as f64).sqrt() * scale,
    })
}

/// Frequency of a large late depth gain at one size.
#[derive(Debug, Clone, Serialize)]
pub struct H2Point {
    pub n: u32,
    pub cutoff: u32,
    /// `cutoff >= n`: all of the depth counts as late.
    pub degenerate: bool,
    pub attempts: u64,
    /// Chains meeting every degree condition.
    pub retained: u64,
    /// `P(h_{n,2}(1) >= c sqrt(ln n), degree conditions)`.
    pub joint_probability: f64,
    pub joint_stderr: f64,
    /// The same event given the degree conditions.
    pub conditional_probability: f64,
}

/// Tracks vertices `1..=k` with degree bounds `thresholds` and measures how
/// often vertex 1 gains at least `c sqrt(ln n)` depth at or below the
/// cutoff `ceil(ln^2 n)`. Size index `i` uses seed `seed + i`.
pub fn h2_negligibility_experiment(
    sizes: &[u32],
    thresholds: &[u32],
    c: f64,
    replicates: u64,
    seed: u64,
) -> Result<Vec<H2Point>> {
    let k = thresholds.len().max(1);
    let mut points = Vec::with_capacity(sizes.len());
    for (idx, &n) in sizes.iter().enumerate() {
        if n < 2 || k as u32 > n {
            return invalid(format!("cannot track {k} vertices of n = {n}"));
        }
        let ln = (n as f64).ln();
        if let Some(&m) = thresholds.iter().find(|&&m| m as f64 >= 2.0 * ln) {
            return invalid(format!("threshold {m} is not below 2 ln n = {:.2}", 2.0 * ln));
        }
        let cutoff = default_cutoff(n);
        let level = c * ln.sqrt();
        let run = run_chunked(
            seed.wrapping_add(idx as u64),
            1 << 12,
            replicates,
            usize::MAX,
            || TrackedCoalescent::new(n, k, cutoff).expect("validated sizes"),
            |s, rng, out: &mut Vec<bool>| {
                if s.sample(rng, thresholds) {
                    out.push(s.outcome(0).h2 as f64 >= level);
                }
            },
        );
        let retained = run.kept.len() as u64;
        let hits = run.kept.iter().filter(|&&x| x).count() as f64;
        let p = hits / run.attempts as f64;
        points.push(H2Point {
            n,
            cutoff,
            degenerate: cutoff >= n,
            attempts: run.attempts,
            retained,
            joint_probability: p,
            joint_stderr: (p * (1.0 - p) / run.attempts as f64).sqrt(),
            conditional_probability: if retained > 0 { hits / retained as f64 } else { f64::NAN },
        });
    }
    Ok(points)
}

/// Frequency of `tau_k > ln^2 n` against the bound `2 k^2 / ln^2 n`.
#[derive(Debug, Clone, Serialize)]
pub struct TauResult {
    pub n: u32,
    pub k: u32,
    pub replicates: u64,
    pub exceed: u64,
    pub probability: f64,
    pub stderr: f64,
    pub bound: f64,
    /// `1 - prod_{j > floor(ln^2 n)} (1 - k(k-1)/(j(j-1)))`.
    pub exact: f64,
}

pub fn tau_experiment(n: u32, k: u32, replicates: u64, seed: u64) -> Result<TauResult> {
    if k < 2 || k > n {
        return invalid(format!("need 2 <= k <= n, got k = {k}, n = {n}"));
    }
    let l2 = (n as f64).ln().powi(2);
    let run = run_chunked(
        seed,
        1 << 12,
        replicates,
        usize::MAX,
        || TrackedCoalescent::new(n, k as usize, 0).expect("validated sizes"),
        |s, rng, out: &mut Vec<bool>| {
            s.sample(rng, &[]);
            out.push(s.tau() as f64 > l2);
        },
    );
    let exceed = run.kept.iter().filter(|&&x| x).count() as u64;
    let p = exceed as f64 / run.attempts as f64;
    let l = l2.floor() as u32;
    let kk = (k * (k - 1)) as f64;
    let survive: f64 = (l + 1..=n).map(|j| 1.0 - kk / (j as f64 * (j as f64 - 1.0))).product();
    Ok(TauResult {
        n,
        k,
        replicates: run.attempts,
        exceed,
        probability: p,
        stderr: (p * (1.0 - p) / run.attempts as f64).sqrt(),
        bound: 2.0 * (k * k) as f64 / l2,
        exact: 1.0 - survive,
    })
}

/// Joint law of the sizes of two truncated selection sets, against two
/// independent copies, on the bulk event.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceResult {
    pub n: u32,
    pub cutoff: u32,
    pub delta: f64,
    pub replicates: u64,
    pub bulk_coupled: f64,
    pub bulk_independent: f64,
    /// Total variation between the conditional laws of the size pair.
    pub tv_sizes: f64,
    /// Mean overlap of the two independent copies (zero for the coupled
    /// sets on the bulk event).
    pub mean_overlap_independent: f64,
}

/// Bulk size pairs of the coupled and the independent draws (if on the bulk
/// event) and the overlap of the independent upper sets.
type PairDraw = (Option<(usize, usize)>, Option<(usize, usize)>, usize);

pub fn truncated_independence_experiment(n: u32, delta: f64, replicates: u64, seed: u64) -> Result<IndependenceResult> {
    if n < 4 || !(0.0..2.0).contains(&delta) || delta == 0.0 {
        return invalid(format!("need n >= 4 and delta in (0, 2), got n = {n}, delta = {delta}"));
    }
    let cutoff = default_cutoff(n);
    let ln = (n as f64).ln();
    let in_band = |s: usize| (s as f64 - 2.0 * ln).abs() <= delta * ln;
    struct Scratch {
        pair: TrackedCoalescent,
        single: TrackedCoalescent,
    }
    let run = run_chunked(
        seed,
        1 << 12,
        replicates,
        usize::MAX,
        || Scratch {
            pair: TrackedCoalescent::new(n, 2, cutoff).expect("n >= 4"),
            single: TrackedCoalescent::new(n, 1, cutoff).expect("n >= 4"),
        },
        |s, rng, out: &mut Vec<PairDraw>| {
            s.pair.sample(rng, &[]);
            let sizes = |o: crate::coalescent::TrackedOutcome| (o.selection_size - o.lower_selection_size) as usize;
            let (c1, c2) = (sizes(s.pair.outcome(0)), sizes(s.pair.outcome(1)));
            let coupled = (s.pair.tau() <= cutoff && in_band(c1) && in_band(c2)).then_some((c1, c2));
            s.single.sample(rng, &[]);
            let r1 = s.single.record(0, 1);
            s.single.sample(rng, &[]);
            let r2 = s.single.record(0, 2);
            let upper = |r: &crate::coalescent::SelectionRecord| -> Vec<u32> {
                r.steps.iter().copied().filter(|&x| x > cutoff).collect()
            };
            let (u1, u2) = (upper(&r1), upper(&r2));
            let overlap = u1.iter().filter(|x| u2.contains(x)).count();
            let independent = (overlap == 0 && in_band(u1.len()) && in_band(u2.len())).then_some((u1.len(), u2.len()));
            out.push((coupled, independent, overlap));
        },
    );
    let total = run.attempts as f64;
    let law = |pick: &dyn Fn(&PairDraw) -> Option<(usize, usize)>| {
        let mut m: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut count = 0.0f64;
        for x in &run.kept {
            if let Some(key) = pick(x) {
                *m.entry(key).or_default() += 1.0;
                count += 1.0;
            }
        }
        (m, count)
    };
    let (coupled, nc) = law(&|x| x.0);
    let (independent, ni) = law(&|x| x.1);
    let keys: Vec<(usize, usize)> = coupled
        .keys()
        .chain(independent.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let p: Vec<f64> = keys.iter().map(|k| coupled.get(k).copied().unwrap_or(0.0) / nc.max(1.0)).collect();
    let q: Vec<f64> = keys.iter().map(|k| independent.get(k).copied().unwrap_or(0.0) / ni.max(1.0)).collect();
    Ok(IndependenceResult {
        n,
        cutoff,
        delta,
        replicates: run.attempts,
        bulk_coupled: nc / total,
        bulk_independent: ni / total,
        tv_sizes: total_variation(&p, &q),
        mean_overlap_independent: run.kept.iter().map(|x| x.2 as f64).sum::<f64>() / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let cfg = CondDepthConfig::new(1 << 20, vec![1.0, 0.5, 0.0], vec![0, -2, -1], 1);
        assert_eq!(cfg.thresholds(), vec![20, 8, 0]);
    }

    #[test]
    fn unconditioned_runs_keep_everything() {
        let mut cfg = CondDepthConfig::new(1000, vec![0.0], vec![0], 4);
        cfg.max_attempts = 3000;
        cfg.chunk = 500;
        let r = conditional_depth_experiment(&cfg).unwrap();
        assert_eq!(r.retained, 3000);
        assert_eq!(r.acceptance_rate, 1.0);
        assert_eq!(r.samples[0].len(), 3000);
        assert!(!r.underpowered);
        // mean depth is close to ln n
        let mean = r.samples[0].iter().map(|s| s.raw_depth as f64).sum::<f64>() / 3000.0;
        assert!((mean - 1000f64.ln()).abs() < 1.0, "{mean}");
    }

    #[test]
    fn conditioning_is_enforced_and_flagged() {
        let mut cfg = CondDepthConfig::new(1 << 10, vec![1.0, 0.0], vec![-6, 0], 5);
        cfg.max_attempts = 20_000;
        cfg.min_retained = 10_000;
        let r = conditional_depth_experiment(&cfg).unwrap();
        assert_eq!(r.thresholds, vec![4, 0]);
        assert!(r.underpowered);
        assert!(r.retained > 0);
        assert_eq!(r.correlations.len(), 1);
        assert!((r.scaled_acceptance - 1.0).abs() < 0.2, "{}", r.scaled_acceptance);
    }

    #[test]
    fn bad_configs() {
        assert!(conditional_depth_experiment(&CondDepthConfig::new(100, vec![], vec![], 1)).is_err());
        assert!(conditional_depth_experiment(&CondDepthConfig::new(100, vec![2.0], vec![0], 1)).is_err());
        assert!(h2_negligibility_experiment(&[1000], &[20], 0.5, 10, 1).is_err());
        assert!(tau_experiment(100, 1, 10, 1).is_err());
        assert!(truncated_independence_experiment(100, 2.5, 10, 1).is_err());
    }

    #[test]
    fn small_h2() {
        // ceil(ln^2 n) < n for every n >= 2, so the flag never fires
        let p = h2_negligibility_experiment(&[2, 3, 20], &[], 0.5, 1000, 2).unwrap();
        assert!(p.iter().all(|x| !x.degenerate));
        assert_eq!(p[0].retained, 1000);
    }

    #[test]
    fn tau_matches_product_formula() {
        let r = tau_experiment(200, 2, 40_000, 3).unwrap();
        assert!((r.probability - r.exact).abs() < 4.0 * r.stderr + 1e-3, "{r:?}");
    }
}
