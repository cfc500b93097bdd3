//! Whole-tree observables of random recursive trees: counting measures, the
//! maximum degree and the depths of the vertices attaining it.

use rand::Rng;
use serde::Serialize;

use super::counting::{count_marked, lattice_offset, lowest_degree, normalized_max_depth, CountingMeasureSample};
use super::gof::{ks_normal, total_variation, GofReport};
use crate::error::{invalid, Result};
use crate::limits::{m_eps_pmf, CanonicalFdd};
use crate::rng::par_replicates;
use crate::tree::Label;

/// Observables of one random recursive tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RrtObservation {
    /// One sample per requested sequence, in request order.
    pub counts: Vec<CountingMeasureSample>,
    pub max_degree: u32,
    pub multiplicity: u32,
    /// Depths of the maximum-degree vertices, in label order.
    pub max_depths: Vec<u32>,
    pub root_degree: u32,
}

#[derive(Default)]
struct Scratch {
    parent: Vec<Label>,
    degree: Vec<u32>,
}

fn depth_in(parent: &[Label], mut v: Label) -> u32 {
    let mut d = 0;
    while parent[v as usize] != 0 {
        v = parent[v as usize];
        d += 1;
    }
    d
}

/// Grows `replicates` independent trees on `n` vertices (replicate `r` uses
/// stream `r` of `seed`) and records their observables, counting over each
/// sequence of `fdds`.
pub fn survey_rrt(n: u32, replicates: u64, seed: u64, fdds: &[CanonicalFdd]) -> Result<Vec<RrtObservation>> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    Ok(par_replicates(seed, 0..replicates, Scratch::default, |_, rng, s| {
        s.parent.clear();
        s.parent.extend_from_slice(&[0, 0]);
        s.degree.clear();
        s.degree.resize(n as usize + 1, 0);
        for v in 2..=n {
            let p = rng.random_range(1..v);
            s.parent.push(p);
            s.degree[p as usize] += 1;
        }
        let parent = &s.parent;
        let floor = fdds.iter().map(|f| lowest_degree(n, f)).min().unwrap_or(u32::MAX);
        let marked: Vec<(u32, f64)> = (1..=n)
            .filter(|&v| s.degree[v as usize] >= floor)
            .map(|v| (s.degree[v as usize], normalized_max_depth(depth_in(parent, v), n)))
            .collect();
        let counts = fdds.iter().map(|f| count_marked(n, &marked, f)).collect();
        let max_degree = s.degree[1..].iter().copied().max().unwrap_or(0);
        let max_depths: Vec<u32> =
            (1..=n).filter(|&v| s.degree[v as usize] == max_degree).map(|v| depth_in(parent, v)).collect();
        RrtObservation {
            counts,
            max_degree,
            multiplicity: max_depths.len() as u32,
            max_depths,
            root_degree: s.degree[1],
        }
    }))
}

/// Law of the number of maximum-degree vertices at one size, against its
/// limit, and the normalized depths of those vertices.
#[derive(Debug, Clone, Serialize)]
pub struct MaxMultiplicityResult {
    pub n: u32,
    pub epsilon_n: f64,
    pub replicates: u64,
    /// `pmf[k]` is the frequency of `k` maximum-degree vertices.
    pub pmf: Vec<f64>,
    /// `P(M_eps = k)` at `eps = epsilon_n`, same indexing.
    pub reference: Vec<f64>,
    pub tv: f64,
    pub depth_z: Vec<f64>,
    pub depth_ks: GofReport,
}

const REFERENCE_LEN: usize = 64;

pub fn max_multiplicity_summary(
    n: u32,
    observations: &[RrtObservation],
    ks_threshold: f64,
) -> Result<MaxMultiplicityResult> {
    if observations.is_empty() {
        return invalid("no observations");
    }
    let epsilon_n = lattice_offset(n);
    let max_k = observations.iter().map(|o| o.multiplicity as usize).max().unwrap_or(1);
    let mut pmf = vec![0.0; max_k.max(REFERENCE_LEN) + 1];
    for o in observations {
        pmf[o.multiplicity as usize] += 1.0;
    }
    let total = observations.len() as f64;
    pmf.iter_mut().for_each(|p| *p /= total);
    let mut reference = vec![0.0; pmf.len()];
    for (k, r) in reference.iter_mut().enumerate().skip(1) {
        *r = m_eps_pmf(k as u32, epsilon_n, 60)?.value;
    }
    let depth_z: Vec<f64> =
        observations.iter().flat_map(|o| o.max_depths.iter().map(|&h| normalized_max_depth(h, n))).collect();
    let depth_ks = ks_normal(&depth_z, ks_threshold);
    Ok(MaxMultiplicityResult {
        n,
        epsilon_n,
        replicates: observations.len() as u64,
        tv: total_variation(&pmf, &reference),
        pmf,
        reference,
        depth_z,
        depth_ks,
    })
}

/// Runs [`survey_rrt`] at each size of the schedule. Size index `i` uses the
/// seed `seed + i`.
pub fn max_multiplicity_experiment(
    schedule: &[u32],
    replicates: u64,
    seed: u64,
    ks_threshold: f64,
) -> Result<Vec<MaxMultiplicityResult>> {
    schedule
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let obs = survey_rrt(n, replicates, seed.wrapping_add(i as u64), &[])?;
            max_multiplicity_summary(n, &obs, ks_threshold)
        })
        .collect()
}
