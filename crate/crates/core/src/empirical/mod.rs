//! Monte Carlo observables of random recursive trees and the coalescent.

mod counting;
mod depth;
mod gof;
mod survey;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::{replicate_rng, StreamRng};

pub use counting::{
    count_measures, count_measures_from, factorial_moment_estimate, falling_factorial, floor_log2, lattice_offset,
    normalized_max_depth, CountingMeasureSample,
};
pub use depth::{
    conditional_depth_experiment, degree_tail_experiment, h2_negligibility_experiment, tau_experiment,
    truncated_independence_experiment, CondDepthConfig, CondDepthResult, DegreeTailResult, H2Point, IndependenceResult,
    NormalizedDepthSample, TauResult,
};
pub use gof::{chi_square, correlation, ks_normal, ks_statistic, total_variation, GofKind, GofReport};
pub use survey::{
    max_multiplicity_experiment, max_multiplicity_summary, survey_rrt, MaxMultiplicityResult, RrtObservation,
};

/// Schema tag carried by every emitted record and JSON document.
pub const SCHEMA: &str = "rrtlab.record.v1";

/// One row of output: a named observable of one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub schema: String,
    pub replicate: u64,
    pub n: u64,
    pub seed: u64,
    pub observable: String,
    pub value: f64,
}

impl Record {
    pub fn new(replicate: u64, n: u64, seed: u64, observable: impl Into<String>, value: f64) -> Self {
        Self { schema: SCHEMA.into(), replicate, n, seed, observable: observable.into(), value }
    }
}

/// `n_l = round(2^(l + eps))` for `l` in `l_min..=l_max`.
pub fn subsequence_schedule(epsilon: f64, l_min: u32, l_max: u32) -> Result<Vec<u32>> {
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("epsilon {epsilon} outside [0, 1]"));
    }
    if l_min < 1 || l_min > l_max {
        return invalid(format!("bad level range {l_min}..={l_max}"));
    }
    (l_min..=l_max)
        .map(|l| {
            let n = (l as f64 + epsilon).exp2().round();
            if n > u32::MAX as f64 {
                invalid(format!("2^({l} + {epsilon}) does not fit in a 32-bit label"))
            } else {
                Ok(n as u32)
            }
        })
        .collect()
}

/// Result of a chunked rejection run.
#[derive(Debug, Clone)]
pub(crate) struct Chunked<T> {
    pub kept: Vec<T>,
    pub attempts: u64,
}

/// Runs `attempt` in chunks of `chunk` attempts, chunk `c` drawing from
/// stream `c` of `seed`, until `target` results are kept or `max_attempts`
/// attempts are made. Chunks are merged in index order and the run stops at
/// the first chunk boundary past the target, so the output does not depend
/// on the number of worker threads.
pub(crate) fn run_chunked<T, S, I, F>(
    seed: u64,
    chunk: u64,
    max_attempts: u64,
    target: usize,
    init: I,
    attempt: F,
) -> Chunked<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &mut StreamRng, &mut Vec<T>) + Sync + Send,
{
    let chunk = chunk.max(1);
    let total_chunks = max_attempts.div_ceil(chunk);
    let batch = (rayon::current_num_threads() as u64 * 4).max(1);
    let mut kept = Vec::new();
    let mut attempts = 0;
    let mut next = 0;
    while next < total_chunks && kept.len() < target {
        let end = (next + batch).min(total_chunks);
        let results: Vec<(u64, Vec<T>)> = (next..end)
            .into_par_iter()
            .map_init(&init, |scratch, c| {
                let mut rng = replicate_rng(seed, c);
                let len = chunk.min(max_attempts - c * chunk);
                let mut out = Vec::new();
                for _ in 0..len {
                    attempt(scratch, &mut rng, &mut out);
                }
                (len, out)
            })
            .collect();
        for (len, mut out) in results {
            if kept.len() >= target {
                break;
            }
            attempts += len;
            kept.append(&mut out);
        }
        next = end;
    }
    Chunked { kept, attempts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn schedules() {
        assert_eq!(subsequence_schedule(0.0, 1, 4).unwrap(), vec![2, 4, 8, 16]);
        let s = subsequence_schedule(0.5, 10, 10).unwrap();
        assert_eq!(s, vec![1448]);
        assert!((lattice_offset(s[0]) - 0.4995).abs() < 1e-3);
        assert_eq!(subsequence_schedule(1.0, 10, 10).unwrap(), vec![2048]);
        assert_eq!(lattice_offset(2048), 0.0);
        assert!(subsequence_schedule(0.0, 0, 3).is_err());
        assert!(subsequence_schedule(1.5, 1, 3).is_err());
        assert!(subsequence_schedule(0.5, 31, 32).is_err());
    }

    #[test]
    fn chunked_is_thread_independent() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                run_chunked(
                    9,
                    100,
                    100_000,
                    50,
                    || (),
                    |_, rng, out: &mut Vec<u32>| {
                        let x = rng.random_range(0..1000u32);
                        if x < 3 {
                            out.push(x);
                        }
                    },
                )
            })
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.kept, b.kept);
        assert_eq!(a.attempts, b.attempts);
        assert!(a.kept.len() >= 50);
        assert_eq!(a.attempts % 100, 0);
        let all = run_chunked(9, 64, 1000, usize::MAX, || (), |_, _, out: &mut Vec<()>| out.push(()));
        assert_eq!((all.kept.len(), all.attempts), (1000, 1000));
    }
}
