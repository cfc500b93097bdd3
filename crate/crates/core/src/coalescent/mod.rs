//! Kingman's discrete n-coalescent as a merge log.
//!
//! Starting from `n` one-vertex trees, step `i` (for `i = n, n-1, ..., 2`)
//! picks an unordered pair of tree indices `{a, b}` with `1 <= a < b <= i`,
//! where trees are indexed in increasing order of their smallest label, and a
//! fair coin decides whether the new edge between the two roots points toward
//! the root of tree `a` or tree `b`. The final tree `t_C` keeps the original
//! labels; relabelling it by edge-addition order gives an increasing tree.

mod fenwick;
pub mod ratios;
pub mod tracked;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tree::{Label, RecursiveTree};
use fenwick::{Dsu, MarkSet};

pub use tracked::{TrackedCoalescent, TrackedOutcome};

/// One merge of the chain: at `step` (the number of trees before merging),
/// trees `a < b` are joined. `toward_a` is the coin: the new edge is directed
/// toward the root of tree `a` when set, toward the root of tree `b` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Merge {
    pub step: u32,
    pub a: u32,
    pub b: u32,
    pub toward_a: bool,
}

impl Merge {
    /// Packs `(pair ordinal, coin)` into one integer, unique within a step.
    pub fn key(&self) -> u32 {
        // ordinal of {a,b} among pairs of 1..=step in colex order
        let b0 = self.b - 1;
        let ordinal = b0 * (b0 - 1) / 2 + (self.a - 1);
        ordinal * 2 + self.toward_a as u32
    }
}

/// The merge log of a (possibly partial) n-coalescent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoalescentChain {
    n: u32,
    merges: Vec<Merge>,
}

impl CoalescentChain {
    /// Validates a merge log: entry `k` must be step `n - k` with
    /// `1 <= a < b <= step`, and there are at most `n - 1` entries.
    pub fn new(n: u32, merges: Vec<Merge>) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        if merges.len() > n as usize - 1 {
            return invalid(format!("{} merges exceed n - 1 = {}", merges.len(), n - 1));
        }
        for (k, m) in merges.iter().enumerate() {
            let step = n - k as u32;
            if m.step != step {
                return invalid(format!("merge {k} has step {}, expected {step}", m.step));
            }
            if !(1 <= m.a && m.a < m.b && m.b <= step) {
                return invalid(format!("merge at step {step} has bad pair {{{}, {}}}", m.a, m.b));
            }
        }
        Ok(Self { n, merges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn is_complete(&self) -> bool {
        self.merges.len() == self.n as usize - 1
    }

    /// Canonical integer key sequence, one entry per step.
    pub fn keys(&self) -> Vec<u32> {
        self.merges.iter().map(Merge::key).collect()
    }

    /// The forest after the merges of steps `n..=trees + 1`, i.e. the forest
    /// with `trees` components.
    pub fn forest_at(&self, trees: u32) -> Result<ForestState> {
        if trees == 0 || trees > self.n {
            return invalid(format!("forest size {trees} outside 1..={}", self.n));
        }
        let needed = (self.n - trees) as usize;
        if needed > self.merges.len() {
            return Err(Error::InvalidState(format!(
                "chain has {} merges, forest with {trees} trees needs {needed}",
                self.merges.len()
            )));
        }
        let mut replay = Replay::new(self.n);
        for m in &self.merges[..needed] {
            replay.apply(m);
        }
        Ok(replay.forest())
    }

    /// The final tree `t_C` with its original labels.
    pub fn final_tree(&self) -> Result<RecursiveTree> {
        self.require_complete()?;
        let mut replay = Replay::new(self.n);
        for m in &self.merges {
            replay.apply(m);
        }
        replay.into_tree()
    }

    fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("chain has {} of {} merges", self.merges.len(), self.n - 1)))
        }
    }
}

/// One tree of a forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub min_label: Label,
    pub root: Label,
    pub vertices: Vec<Label>,
}

/// A forest of the chain: components ordered by smallest label, plus the
/// parent links added so far (0 for roots; slot 0 unused).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestState {
    pub components: Vec<Component>,
    pub parent: Vec<Label>,
}

/// For a tracked vertex: the steps at which its tree was merged (in the
/// order they happened, i.e. decreasing step index) and the subset of those
/// steps at which the new edge pointed away from its tree's root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub vertex: Label,
    pub steps: Vec<u32>,
    pub kappa_steps: Vec<u32>,
}

impl SelectionRecord {
    pub fn new(vertex: Label) -> Self {
        Self { vertex, steps: Vec::new(), kappa_steps: Vec::new() }
    }

    /// `|S_n(v)|`.
    pub fn size(&self) -> usize {
        self.steps.len()
    }

    /// Final depth: one per depth-increasing step.
    pub fn depth(&self) -> u32 {
        self.kappa_steps.len() as u32
    }

    /// Final degree: the selection steps before the first depth-increasing one.
    pub fn degree(&self) -> u32 {
        match self.kappa_steps.first() {
            None => self.steps.len() as u32,
            Some(first) => self.steps.iter().take_while(|&&s| s != *first).count() as u32,
        }
    }

    pub fn contains(&self, step: u32) -> bool {
        // steps are strictly decreasing
        self.steps.binary_search_by(|s| step.cmp(s)).is_ok()
    }
}

/// Selection record split at a cutoff step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSelection {
    pub vertex: Label,
    pub cutoff: u32,
    /// Selection steps strictly above the cutoff.
    pub upper: Vec<u32>,
    /// Depth in the forest with `cutoff` trees.
    pub h1: u32,
    /// Depth gained after that forest.
    pub h2: u32,
    /// Set when `cutoff >= n`, so the upper part is empty by construction.
    pub degenerate: bool,
}

/// `ceil(ln(n)^2)`, the default truncation step.
pub fn default_cutoff(n: u32) -> u32 {
    let l = (n as f64).ln();
    (l * l).ceil() as u32
}

/// Splits a selection record at `cutoff`. `n` is only used to flag the
/// degenerate case `cutoff >= n`.
pub fn partial_depths(record: &SelectionRecord, n: u32, cutoff: u32) -> TruncatedSelection {
    let upper: Vec<u32> = record.steps.iter().copied().filter(|&s| s > cutoff).collect();
    let h1 = record.kappa_steps.iter().filter(|&&s| s > cutoff).count() as u32;
    TruncatedSelection { vertex: record.vertex, cutoff, upper, h1, h2: record.depth() - h1, degenerate: cutoff >= n }
}

/// Largest step at which two distinct vertices among `1..=k` were selected
/// together; 1 when that never happens.
pub fn tau_k(records: &BTreeMap<Label, SelectionRecord>, n: u32, k: u32) -> Result<u32> {
    if k < 2 {
        return invalid("tau_k needs k >= 2");
    }
    if k > n {
        return invalid(format!("k = {k} exceeds n = {n}"));
    }
    let recs: Vec<&SelectionRecord> = (1..=k)
        .map(|v| records.get(&v).ok_or_else(|| Error::InvalidArgument(format!("vertex {v} is not tracked"))))
        .collect::<Result<_>>()?;
    Ok(tau_of(recs.iter().map(|r| r.steps.as_slice())))
}

pub(crate) fn tau_of<'a>(sets: impl Iterator<Item = &'a [u32]>) -> u32 {
    let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
    for s in sets {
        for &step in s {
            *seen.entry(step).or_default() += 1;
        }
    }
    seen.iter().rev().find(|(_, &c)| c >= 2).map(|(&s, _)| s).unwrap_or(1)
}

/// A simulated chain together with its final tree and the selection records
/// of the tracked vertices.
#[derive(Debug, Clone)]
pub struct KingmanRun {
    pub chain: CoalescentChain,
    pub tree: RecursiveTree,
    pub records: BTreeMap<Label, SelectionRecord>,
}

/// Runs Kingman's n-coalescent: at every step the pair is uniform over the
/// `i(i-1)/2` pairs and the coin is fair, all independent.
pub fn run_kingman<R: Rng + ?Sized>(n: u32, rng: &mut R, tracked: &[Label]) -> Result<KingmanRun> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if let Some(&bad) = tracked.iter().find(|&&v| v == 0 || v > n) {
        return invalid(format!("tracked label {bad} outside 1..={n}"));
    }
    let mut replay = Replay::new(n);
    let mut records: BTreeMap<Label, SelectionRecord> = tracked.iter().map(|&v| (v, SelectionRecord::new(v))).collect();
    let mut merges = Vec::with_capacity(n as usize - 1);
    for i in (2..=n).rev() {
        let x = rng.random_range(1..=i);
        let mut y = rng.random_range(1..i);
        if y >= x {
            y += 1;
        }
        let m = Merge { step: i, a: x.min(y), b: x.max(y), toward_a: rng.random() };
        replay.apply_tracked(&m, &mut records);
        merges.push(m);
    }
    let chain = CoalescentChain { n, merges };
    let tree = replay.into_tree()?;
    Ok(KingmanRun { chain, tree, records })
}

/// Selection records of `tracked` for a given chain.
pub fn selection_records(chain: &CoalescentChain, tracked: &[Label]) -> Result<BTreeMap<Label, SelectionRecord>> {
    if let Some(&bad) = tracked.iter().find(|&&v| v == 0 || v > chain.n) {
        return invalid(format!("tracked label {bad} outside 1..={}", chain.n));
    }
    let mut replay = Replay::new(chain.n);
    let mut records: BTreeMap<Label, SelectionRecord> = tracked.iter().map(|&v| (v, SelectionRecord::new(v))).collect();
    for m in &chain.merges {
        replay.apply_tracked(m, &mut records);
    }
    Ok(records)
}

/// The relabelling `sigma_C` (indexed by original label, slot 0 unused): the
/// final root maps to 1 and the tail of the edge added at step `i` maps to `i`.
pub fn sigma_relabel(chain: &CoalescentChain) -> Result<Vec<Label>> {
    chain.require_complete()?;
    let mut replay = Replay::new(chain.n);
    let mut sigma = vec![0; chain.n as usize + 1];
    for m in &chain.merges {
        let (tail, _) = replay.apply(m);
        sigma[tail as usize] = m.step;
    }
    let tree = replay.into_tree()?;
    sigma[tree.root() as usize] = 1;
    Ok(sigma)
}

/// `phi(C)`: the final tree relabelled by `sigma_C`, an increasing tree.
pub fn phi(chain: &CoalescentChain) -> Result<RecursiveTree> {
    let sigma = sigma_relabel(chain)?;
    let tree = chain.final_tree()?;
    tree.relabel(&sigma)
}

/// Empirical law of `|S_n(v)|` from full coalescent runs.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionLaw {
    pub n: u32,
    pub vertex: Label,
    pub replicates: u64,
    /// `pmf[s]` is the frequency of `|S_n(v)| = s`.
    pub pmf: Vec<f64>,
    pub mean: f64,
    /// `sum_{i=2}^n 2/i`.
    pub expected_mean: f64,
}

pub fn selection_set_law_check(n: u32, v: Label, replicates: u64, seed: u64) -> Result<SelectionLaw> {
    if n < 2 || v == 0 || v > n {
        return invalid(format!("need 1 <= v <= n and n >= 2, got v = {v}, n = {n}"));
    }
    if replicates == 0 {
        return invalid("replicates must be positive");
    }
    let sizes = crate::rng::par_replicates(seed, 0..replicates, || (), |_, rng, _| selection_size_of(n, v, rng));
    let max = sizes.iter().copied().max().unwrap_or(0) as usize;
    let mut pmf = vec![0.0; max + 1];
    for &s in &sizes {
        pmf[s as usize] += 1.0;
    }
    pmf.iter_mut().for_each(|p| *p /= replicates as f64);
    let mean = sizes.iter().map(|&s| s as f64).sum::<f64>() / replicates as f64;
    let expected_mean = (2..=n).map(|i| 2.0 / i as f64).sum();
    Ok(SelectionLaw { n, vertex: v, replicates, pmf, mean, expected_mean })
}

/// `|S_n(v)|` of one chain, following the index of `v`'s tree among trees
/// ordered by smallest label. Only the minima need to be tracked.
fn selection_size_of<R: Rng + ?Sized>(n: u32, v: Label, rng: &mut R) -> u32 {
    let mut minima = MarkSet::full(n as usize);
    let mut own_min = v as usize;
    let mut own_index = v; // rank of own_min among current minima
    let mut count = 0;
    for i in (2..=n).rev() {
        let x = rng.random_range(1..=i);
        let mut y = rng.random_range(1..i);
        if y >= x {
            y += 1;
        }
        let (a, b) = (x.min(y), x.max(y));
        let (ma, mb) = (minima.kth(a), minima.kth(b));
        if a == own_index || b == own_index {
            count += 1;
            own_min = ma;
        }
        minima.unmark(mb);
        if mb < own_min {
            own_index -= 1;
        } else if a == own_index || b == own_index {
            own_index = a;
        }
        let _ = rng.random::<bool>();
    }
    count
}

/// Incremental replay of a merge log.
struct Replay {
    minima: MarkSet,
    dsu: Dsu,
    /// smallest label of the set whose DSU representative is the index
    rep_min: Vec<Label>,
    /// root of the component whose smallest label is the index
    root_of_min: Vec<Label>,
    parent: Vec<Label>,
}

impl Replay {
    fn new(n: u32) -> Self {
        let n = n as usize;
        Self {
            minima: MarkSet::full(n),
            dsu: Dsu::new(n),
            rep_min: (0..=n as Label).collect(),
            root_of_min: (0..=n as Label).collect(),
            parent: vec![0; n + 1],
        }
    }

    /// Applies one merge; returns `(tail, head)` of the new edge.
    fn apply(&mut self, m: &Merge) -> (Label, Label) {
        let min_a = self.minima.kth(m.a) as Label;
        let min_b = self.minima.kth(m.b) as Label;
        let (root_a, root_b) = (self.root_of_min[min_a as usize], self.root_of_min[min_b as usize]);
        let (tail, head) = if m.toward_a { (root_b, root_a) } else { (root_a, root_b) };
        self.parent[tail as usize] = head;
        // min_a < min_b because trees are ordered by smallest label
        self.minima.unmark(min_b as usize);
        self.root_of_min[min_a as usize] = head;
        let ra = self.dsu.find(min_a);
        let rb = self.dsu.find(min_b);
        let r = self.dsu.union_roots(ra, rb);
        self.rep_min[r as usize] = min_a;
        (tail, head)
    }

    fn apply_tracked(&mut self, m: &Merge, records: &mut BTreeMap<Label, SelectionRecord>) {
        if records.is_empty() {
            self.apply(m);
            return;
        }
        let min_a = self.minima.kth(m.a) as Label;
        let min_b = self.minima.kth(m.b) as Label;
        let child_min = if m.toward_a { min_b } else { min_a };
        for rec in records.values_mut() {
            let rep = self.dsu.find(rec.vertex);
            let own = self.rep_min[rep as usize];
            if own == min_a || own == min_b {
                rec.steps.push(m.step);
                if own == child_min {
                    rec.kappa_steps.push(m.step);
                }
            }
        }
        self.apply(m);
    }

    fn forest(&mut self) -> ForestState {
        let n = self.parent.len() - 1;
        let mut by_min: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        for v in 1..=n as Label {
            let rep = self.dsu.find(v);
            by_min.entry(self.rep_min[rep as usize]).or_default().push(v);
        }
        let components = by_min
            .into_iter()
            .map(|(min_label, vertices)| Component { min_label, root: self.root_of_min[min_label as usize], vertices })
            .collect();
        ForestState { components, parent: self.parent.clone() }
    }

    fn into_tree(self) -> Result<RecursiveTree> {
        let root = self.root_of_min[1];
        RecursiveTree::from_parents(self.parent, root)
    }
}
