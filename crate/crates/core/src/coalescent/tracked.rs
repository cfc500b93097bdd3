//! Coalescent restricted to a few tracked vertices.
//!
//! Trees without tracked vertices are interchangeable, so only the trees
//! holding tracked vertices are represented. The number of steps until one
//! of them is picked is drawn in one shot: with `c` tracked trees among `i`,
//! the probability that none of steps `i, i-1, ..., j+1` picks a tracked tree
//! is `prod_{s<c} (j-s)(j-1-s) / ((i-s)(i-1-s))`.

use rand::Rng;

use crate::error::{invalid, Result};

use super::{Label, SelectionRecord};

/// Final statistics of one tracked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackedOutcome {
    pub degree: u32,
    pub depth: u32,
    /// Depth gained at steps above the cutoff.
    pub h1: u32,
    /// Depth gained at steps at or below the cutoff.
    pub h2: u32,
    pub selection_size: u32,
    /// Selections at or below the cutoff.
    pub lower_selection_size: u32,
}

#[derive(Debug, Clone, Default)]
struct VertexState {
    steps: Vec<u32>,
    kappa: Vec<u32>,
    degree: u32,
    is_root: bool,
}

#[derive(Debug, Clone, Default)]
struct Group {
    members: Vec<usize>,
    /// Tracked member that is the root of the tree, if any.
    root: Option<usize>,
}

/// Reusable sampler for the selection records of `k` tracked vertices.
#[derive(Debug, Clone)]
pub struct TrackedCoalescent {
    n: u32,
    cutoff: u32,
    state: Vec<VertexState>,
    groups: Vec<Group>,
    spare: Vec<Group>,
    tau: u32,
}

impl TrackedCoalescent {
    /// Sampler for `k` tracked vertices out of `n`, splitting depths at `cutoff`.
    pub fn new(n: u32, k: usize, cutoff: u32) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        if k == 0 || k > n as usize {
            return invalid(format!("cannot track {k} of {n} vertices"));
        }
        Ok(Self {
            n,
            cutoff,
            state: vec![VertexState::default(); k],
            groups: Vec::with_capacity(k),
            spare: Vec::with_capacity(k),
            tau: 1,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tracked(&self) -> usize {
        self.state.len()
    }

    /// Runs one chain. `min_degree[t]` (missing entries mean 0) is a lower
    /// bound on the final degree of tracked vertex `t`; the run stops early and
    /// returns `false` as soon as one bound can no longer be met.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R, min_degree: &[u32]) -> bool {
        self.reset();
        let mut i = self.n;
        while i >= 2 {
            let c = self.groups.len() as u32;
            let step = next_event(i, c, rng);
            if c >= 2 && rng.random_range(0..(c - 1 + 2 * (step - c))) < c - 1 {
                self.merge_two(step, rng);
            } else {
                self.merge_one(step, rng);
            }
            if !self.feasible(min_degree) {
                return false;
            }
            i = step - 1;
        }
        self.state.iter().enumerate().all(|(t, s)| s.degree >= min_degree.get(t).copied().unwrap_or(0))
    }

    /// Outcome of tracked vertex `t` after a completed [`sample`](Self::sample).
    pub fn outcome(&self, t: usize) -> TrackedOutcome {
        let s = &self.state[t];
        let h1 = s.kappa.iter().filter(|&&x| x > self.cutoff).count() as u32;
        let lower = s.steps.iter().filter(|&&x| x <= self.cutoff).count() as u32;
        TrackedOutcome {
            degree: s.degree,
            depth: s.kappa.len() as u32,
            h1,
            h2: s.kappa.len() as u32 - h1,
            selection_size: s.steps.len() as u32,
            lower_selection_size: lower,
        }
    }

    /// Largest step at which two tracked vertices were selected together,
    /// or 1 if that never happened.
    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// Selection record of tracked vertex `t`, labelled `vertex`.
    pub fn record(&self, t: usize, vertex: Label) -> SelectionRecord {
        let s = &self.state[t];
        SelectionRecord { vertex, steps: s.steps.clone(), kappa_steps: s.kappa.clone() }
    }

    fn reset(&mut self) {
        self.tau = 1;
        self.spare.append(&mut self.groups);
        for (t, s) in self.state.iter_mut().enumerate() {
            s.steps.clear();
            s.kappa.clear();
            s.degree = 0;
            s.is_root = true;
            let mut g = self.spare.pop().unwrap_or_default();
            g.members.clear();
            g.members.push(t);
            g.root = Some(t);
            self.groups.push(g);
        }
    }

    fn mark_selected(&mut self, g: usize, step: u32, child: bool) {
        let group = &self.groups[g];
        for &t in &group.members {
            let s = &mut self.state[t];
            s.steps.push(step);
            if child {
                s.kappa.push(step);
            }
        }
        if let Some(r) = group.root {
            if child {
                self.state[r].is_root = false;
            } else {
                self.state[r].degree += 1;
            }
        }
    }

    /// A tracked tree merges with an untracked one.
    fn merge_one<R: Rng + ?Sized>(&mut self, step: u32, rng: &mut R) {
        let g = rng.random_range(0..self.groups.len());
        let child = rng.random::<bool>();
        if self.groups[g].members.len() >= 2 {
            self.tau = self.tau.max(step);
        }
        self.mark_selected(g, step, child);
        if child {
            self.groups[g].root = None;
        }
    }

    /// Two tracked trees merge.
    fn merge_two<R: Rng + ?Sized>(&mut self, step: u32, rng: &mut R) {
        let c = self.groups.len();
        let x = rng.random_range(0..c);
        let mut y = rng.random_range(0..c - 1);
        if y >= x {
            y += 1;
        }
        // x keeps its root, y's root becomes a child
        self.tau = self.tau.max(step);
        self.mark_selected(x, step, false);
        self.mark_selected(y, step, true);
        let mut absorbed = self.groups.swap_remove(y);
        let x = if x == c - 1 { y } else { x };
        self.groups[x].members.append(&mut absorbed.members);
        self.spare.push(absorbed);
    }

    fn feasible(&self, min_degree: &[u32]) -> bool {
        self.state.iter().zip(min_degree).all(|(s, &m)| s.is_root || s.degree >= m)
    }
}

/// Step of the next merge touching one of `c >= 1` tracked trees, starting
/// from a forest with `i` trees.
fn next_event<R: Rng + ?Sized>(i: u32, c: u32, rng: &mut R) -> u32 {
    if c >= i {
        return i;
    }
    let u = 1.0 - rng.random::<f64>();
    let survive = |j: u32| -> f64 {
        (0..c).fold(1.0, |acc, s| {
            let (j, i, s) = (j as f64, i as f64, s as f64);
            acc * ((j - s) * (j - 1.0 - s)) / ((i - s) * (i - 1.0 - s))
        })
    };
    let lo = c + 1;
    let mut j = if c == 1 {
        let x = u * i as f64 * (i as f64 - 1.0);
        ((1.0 + (1.0 + 4.0 * x).sqrt()) / 2.0).ceil() as u32
    } else {
        (i as f64 * u.powf(0.5 / c as f64)).round() as u32
    };
    j = j.clamp(lo, i);
    while j < i && survive(j) < u {
        j += 1;
    }
    while j > lo && survive(j - 1) >= u {
        j -= 1;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalescent::run_kingman;
    use crate::rng::seeded;

    #[test]
    fn next_event_matches_step_by_step_law() {
        // probability that the first tracked merge happens at step j
        let (i, c) = (12u32, 3u32);
        let mut rng = seeded(5);
        let reps = 200_000;
        let mut hist = vec![0u32; i as usize + 1];
        for _ in 0..reps {
            hist[next_event(i, c, &mut rng) as usize] += 1;
        }
        let mut none_so_far = 1.0;
        for j in (2..=i).rev() {
            let free = j.saturating_sub(c) * j.saturating_sub(c + 1);
            let hit = 1.0 - free as f64 / (j * (j - 1)) as f64;
            let p = none_so_far * hit;
            none_so_far *= 1.0 - hit;
            let freq = hist[j as usize] as f64 / reps as f64;
            let sd = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((freq - p).abs() < 5.0 * sd + 1e-9, "j={j}: {freq} vs {p}");
        }
    }

    #[test]
    fn forest_of_tracked_trees_is_one_event_per_step() {
        assert_eq!(next_event(5, 5, &mut seeded(1)), 5);
        assert_eq!(next_event(2, 1, &mut seeded(1)), 2);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(TrackedCoalescent::new(0, 1, 0).is_err());
        assert!(TrackedCoalescent::new(3, 4, 0).is_err());
        assert!(TrackedCoalescent::new(3, 0, 0).is_err());
    }

    #[test]
    fn depth_identity_and_degree_rule() {
        let mut s = TrackedCoalescent::new(300, 3, 33).unwrap();
        let mut rng = seeded(2);
        for _ in 0..500 {
            assert!(s.sample(&mut rng, &[]));
            for t in 0..3 {
                let o = s.outcome(t);
                let r = s.record(t, t as Label + 1);
                assert_eq!(o.depth, r.depth());
                assert_eq!(o.degree, r.degree());
                assert_eq!(o.h1 + o.h2, o.depth);
                assert!(o.h2 <= o.lower_selection_size);
            }
        }
    }

    #[test]
    fn two_vertex_laws_agree_with_full_chain() {
        // compare mean degree, depth, selection size and co-selection time
        let n = 60;
        let reps = 20_000;
        let mut lazy = TrackedCoalescent::new(n, 2, 10).unwrap();
        let mut rng = seeded(11);
        let mut a = [0f64; 5];
        let mut b = [0f64; 5];
        for _ in 0..reps {
            lazy.sample(&mut rng, &[]);
            let (o1, o2) = (lazy.outcome(0), lazy.outcome(1));
            a[0] += o1.degree as f64;
            a[1] += o1.depth as f64;
            a[2] += o2.selection_size as f64;
            a[3] += lazy.tau() as f64;
            a[4] += (o1.depth * o2.depth) as f64;
            let run = run_kingman(n, &mut rng, &[1, 2]).unwrap();
            let (r1, r2) = (&run.records[&1], &run.records[&2]);
            b[0] += r1.degree() as f64;
            b[1] += r1.depth() as f64;
            b[2] += r2.size() as f64;
            b[3] += super::super::tau_k(&run.records, n, 2).unwrap() as f64;
            b[4] += (r1.depth() * r2.depth()) as f64;
        }
        for k in 0..5 {
            let (x, y) = (a[k] / reps as f64, b[k] / reps as f64);
            assert!((x - y).abs() < 0.04 * y.abs().max(1.0), "statistic {k}: {x} vs {y}");
        }
    }

    #[test]
    fn early_rejection_keeps_only_high_degrees() {
        let mut s = TrackedCoalescent::new(1000, 1, 48).unwrap();
        let mut rng = seeded(3);
        let mut kept = 0;
        for _ in 0..4000 {
            if s.sample(&mut rng, &[3]) {
                kept += 1;
                assert!(s.outcome(0).degree >= 3);
            }
        }
        // P(d >= 3) is close to 1/8
        let f = kept as f64 / 4000.0;
        assert!((f - 0.125).abs() < 0.03, "{f}");
    }
}
