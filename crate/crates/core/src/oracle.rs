//! Exhaustive enumeration for small sizes: all increasing trees, all
//! coalescent chains with coins, and exact laws derived from them.
//!
//! Probabilities are exact rationals. Every chain of the n-coalescent has
//! probability `1 / (n! (n-1)!)` and every increasing tree `1 / (n-1)!`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coalescent::{phi, ratios, selection_records, CoalescentChain, Merge};
use crate::error::{invalid, Result};
use crate::tree::{Label, RecursiveTree};

pub type Rational = Ratio<i64>;

/// Exact probability mass function.
pub type Pmf<K> = BTreeMap<K, Rational>;

pub const MAX_TREE_N: u32 = 8;
pub const MAX_CHAIN_N: u32 = 6;
pub const MAX_PHI_N: u32 = 5;

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `n! (n-1)!`, the number of oriented chains.
pub fn chain_count(n: u32) -> i64 {
    factorial(n) * factorial(n.saturating_sub(1))
}

fn check_n(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        return invalid(format!("n = {n} outside 1..={max}"));
    }
    Ok(())
}

/// All `(n-1)!` increasing trees on `{1..n}`.
pub fn enumerate_increasing_trees(n: u32) -> Result<Vec<RecursiveTree>> {
    check_n(n, MAX_TREE_N)?;
    let mut out = Vec::with_capacity(factorial(n - 1) as usize);
    let mut parents = Vec::with_capacity(n as usize);
    fn rec(n: u32, parents: &mut Vec<Label>, out: &mut Vec<RecursiveTree>) -> Result<()> {
        let v = parents.len() as u32 + 2;
        if v > n {
            out.push(RecursiveTree::from_increasing_parents(parents)?);
            return Ok(());
        }
        for p in 1..v {
            parents.push(p);
            rec(n, parents, out)?;
            parents.pop();
        }
        Ok(())
    }
    rec(n, &mut parents, &mut out)?;
    Ok(out)
}

/// All `n! (n-1)!` oriented chains: every pair at every step, with both coins.
pub fn enumerate_chains(n: u32) -> Result<Vec<CoalescentChain>> {
    check_n(n, MAX_CHAIN_N)?;
    let mut out = Vec::with_capacity(chain_count(n) as usize);
    let mut merges = Vec::with_capacity(n as usize);
    fn rec(n: u32, merges: &mut Vec<Merge>, out: &mut Vec<CoalescentChain>) -> Result<()> {
        let step = n - merges.len() as u32;
        if step < 2 {
            out.push(CoalescentChain::new(n, merges.clone())?);
            return Ok(());
        }
        for b in 2..=step {
            for a in 1..b {
                for toward_a in [true, false] {
                    merges.push(Merge { step, a, b, toward_a });
                    rec(n, merges, out)?;
                    merges.pop();
                }
            }
        }
        Ok(())
    }
    rec(n, &mut merges, &mut out)?;
    Ok(out)
}

/// Result of checking that `phi` is an `n!`-to-1 map onto increasing trees.
#[derive(Debug, Clone, Serialize)]
pub struct PhiReport {
    pub n: u32,
    pub chains: usize,
    pub distinct_chains: usize,
    pub expected_chains: i64,
    pub trees: usize,
    pub expected_trees: i64,
    pub min_fiber: usize,
    pub max_fiber: usize,
    pub expected_fiber: i64,
    /// First problem found, with the offending data.
    pub counterexample: Option<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn verify_phi(n: u32) -> Result<PhiReport> {
    check_n(n, MAX_PHI_N)?;
    let chains = enumerate_chains(n)?;
    let keys: BTreeSet<Vec<u32>> = chains.iter().map(CoalescentChain::keys).collect();
    let trees = enumerate_increasing_trees(n)?;
    let mut fibers: BTreeMap<Vec<Label>, usize> = trees.iter().map(|t| (t.parent_slice().to_vec(), 0)).collect();
    let mut counterexample = None;
    for c in &chains {
        let t = phi(c)?;
        match fibers.get_mut(t.parent_slice()) {
            Some(count) => *count += 1,
            None => {
                counterexample.get_or_insert_with(|| {
                    format!("chain {:?} maps to non-increasing tree {:?}", c.merges(), t.parent_slice())
                });
            }
        }
    }
    let expected_fiber = factorial(n);
    let min_fiber = fibers.values().copied().min().unwrap_or(0);
    let max_fiber = fibers.values().copied().max().unwrap_or(0);
    if counterexample.is_none() {
        if let Some((t, f)) = fibers.iter().find(|(_, &f)| f as i64 != expected_fiber) {
            counterexample = Some(format!("tree {t:?} has fiber {f}, expected {expected_fiber}"));
        }
    }
    let report = PhiReport {
        n,
        chains: chains.len(),
        distinct_chains: keys.len(),
        expected_chains: chain_count(n),
        trees: trees.len(),
        expected_trees: factorial(n - 1),
        min_fiber,
        max_fiber,
        expected_fiber,
        counterexample,
    };
    if report.counterexample.is_none()
        && (report.chains as i64 != report.expected_chains
            || report.distinct_chains != report.chains
            || report.trees as i64 != report.expected_trees)
    {
        return Ok(PhiReport {
            counterexample: Some(format!(
                "counts: {} chains ({} distinct, expected {}), {} trees (expected {})",
                report.chains, report.distinct_chains, report.expected_chains, report.trees, report.expected_trees
            )),
            ..report
        });
    }
    Ok(report)
}

/// Per-chain statistics of every vertex: `(degree, depth, |S_n(v)|)` in the
/// final tree with original labels.
#[derive(Debug, Clone)]
pub struct ChainUniverse {
    pub n: u32,
    /// `stats[c][v - 1]` for chain `c`.
    pub stats: Vec<Vec<(u32, u32, u32)>>,
    /// `selections[c][v - 1]`: the selection steps of `v` in chain `c`.
    pub selections: Vec<Vec<Vec<u32>>>,
}

impl ChainUniverse {
    pub fn build(n: u32) -> Result<Self> {
        let chains = enumerate_chains(n)?;
        let all: Vec<Label> = (1..=n).collect();
        let mut stats = Vec::with_capacity(chains.len());
        let mut selections = Vec::with_capacity(chains.len());
        for c in &chains {
            let t = c.final_tree()?;
            let (deg, depth) = (t.degrees(), t.depths());
            let recs = selection_records(c, &all)?;
            stats.push(all.iter().map(|&v| (deg[v as usize], depth[v as usize], recs[&v].size() as u32)).collect());
            selections.push(all.iter().map(|v| recs[v].steps.clone()).collect());
        }
        Ok(Self { n, stats, selections })
    }

    fn weight(&self) -> Rational {
        Rational::new(1, self.stats.len() as i64)
    }

    /// Law of `key(stats of chain)` under the uniform chain.
    pub fn law<K: Ord, F: Fn(&[(u32, u32, u32)]) -> K>(&self, key: F) -> Pmf<K> {
        let w = self.weight();
        let mut pmf = Pmf::new();
        for s in &self.stats {
            *pmf.entry(key(s)).or_insert_with(|| Rational::from_integer(0)) += w;
        }
        pmf
    }
}

fn add<K: Ord>(pmf: &mut Pmf<K>, k: K, p: Rational) {
    *pmf.entry(k).or_insert_with(|| Rational::from_integer(0)) += p;
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// Exact law of `(d_n(v), h_n(v))` in the coalescent tree.
pub fn exact_degree_depth_law(n: u32, v: Label) -> Result<Pmf<(u32, u32)>> {
    check_n(n, MAX_CHAIN_N)?;
    if v == 0 || v > n {
        return invalid(format!("vertex {v} outside 1..={n}"));
    }
    let u = ChainUniverse::build(n)?;
    Ok(u.law(|s| (s[v as usize - 1].0, s[v as usize - 1].1)))
}

/// Law of `(degree, depth)` of a uniformly chosen vertex of a uniform
/// increasing tree.
pub fn uniform_label_law(n: u32) -> Result<Pmf<(u32, u32)>> {
    let trees = enumerate_increasing_trees(n)?;
    let w = Rational::new(1, trees.len() as i64 * n as i64);
    let mut pmf = Pmf::new();
    for t in &trees {
        let (deg, depth) = (t.degrees(), t.depths());
        for v in 1..=n as usize {
            add(&mut pmf, (deg[v], depth[v]), w);
        }
    }
    Ok(pmf)
}

/// Law of the sorted multiset of `(degree, depth)` pairs of a uniform
/// increasing tree.
pub fn increasing_multiset_law(n: u32) -> Result<Pmf<Vec<(u32, u32)>>> {
    let trees = enumerate_increasing_trees(n)?;
    let w = Rational::new(1, trees.len() as i64);
    let mut pmf = Pmf::new();
    for t in &trees {
        add(&mut pmf, multiset(t.degrees(), t.depths()), w);
    }
    Ok(pmf)
}

fn multiset(deg: Vec<u32>, depth: Vec<u32>) -> Vec<(u32, u32)> {
    let mut m: Vec<(u32, u32)> = deg[1..].iter().copied().zip(depth[1..].iter().copied()).collect();
    m.sort_unstable();
    m
}

/// Expected number of vertices of an RRT on `n` vertices with degree exactly
/// `d`, for `d in 0..cap`, and with degree at least `cap` in the last slot.
/// Vertex `i` has degree `sum_{j=i}^{n-1} Ber(1/j)`; the laws are built by
/// adding one Bernoulli at a time from `j = n - 1` down, in floating point.
pub fn degree_count_means(n: u32, cap: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let cap = cap as usize;
    let mut law = vec![0.0; cap + 1];
    law[0] = 1.0;
    let mut means = vec![0.0; cap + 1];
    // vertex n has no children
    means[0] = 1.0;
    for i in (1..n).rev() {
        let p = 1.0 / i as f64;
        let top = law[cap];
        for d in (1..=cap).rev() {
            law[d] = law[d] * (1.0 - p) + law[d - 1] * p;
        }
        law[0] *= 1.0 - p;
        law[cap] += top * p;
        means.iter_mut().zip(&law).for_each(|(m, q)| *m += q);
    }
    Ok(means)
}

/// Law of `sum_{j=from}^{to} Ber(1/j)`.
pub fn bernoulli_sum_law(from: u32, to: u32, scale: i64) -> Pmf<u32> {
    let mut pmf = Pmf::from([(0u32, Rational::from_integer(1))]);
    for j in from.max(1)..=to {
        let p = Rational::new(scale, j as i64).min(Rational::from_integer(1));
        let mut next = Pmf::new();
        for (&k, &w) in &pmf {
            add(&mut next, k, w * (Rational::from_integer(1) - p));
            add(&mut next, k + 1, w * p);
        }
        next.retain(|_, w| *w != zero());
        pmf = next;
    }
    pmf
}

/// `P(Bin(t, 1/2) <= l)` as a rational.
fn binomial_at_most(t: u32, l: i64) -> Rational {
    if l < 0 {
        return zero();
    }
    let mut c = 1i64;
    let mut acc = 0i64;
    for k in 0..=t as i64 {
        if k > 0 {
            c = c * (t as i64 - k + 1) / k;
        }
        if k <= l {
            acc += c;
        }
    }
    Rational::new(acc, 1i64 << t)
}

/// One failed comparison of two exact quantities.
#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub what: String,
    pub left: String,
    pub right: String,
}

/// Outcome of a family of exact identities.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: &'static str,
    pub n: u32,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl IdentityReport {
    fn new(name: &'static str, n: u32) -> Self {
        Self { name, n, checked: 0, mismatches: Vec::new() }
    }

    fn compare<T: PartialEq + std::fmt::Display>(&mut self, what: impl FnOnce() -> String, left: T, right: T) {
        self.checked += 1;
        if left != right {
            self.mismatches.push(Mismatch { what: what(), left: left.to_string(), right: right.to_string() });
        }
    }

    fn compare_pmf<K: Ord + std::fmt::Debug>(&mut self, what: &str, left: &Pmf<K>, right: &Pmf<K>) {
        let keys: BTreeSet<&K> = left.keys().chain(right.keys()).collect();
        for k in keys {
            let l = left.get(k).copied().unwrap_or_else(zero);
            let r = right.get(k).copied().unwrap_or_else(zero);
            self.compare(|| format!("{what} at {k:?}"), l, r);
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Degree/depth identities for vertex `v`:
/// the selection-set size is `sum_{i=2}^n Ber(2/i)`;
/// `d_n(v)` has the law of `min(G, |S_n(v)|)` with `P(G = k) = 2^-(k+1)`;
/// `P(d >= k, h <= l) = 2^-k P(Bin(|S| - k, 1/2) <= l, |S| >= k)` for all `k, l`.
pub fn degree_depth_identities(universe: &ChainUniverse, v: Label) -> Result<IdentityReport> {
    let n = universe.n;
    if v == 0 || v > n {
        return invalid(format!("vertex {v} outside 1..={n}"));
    }
    let idx = v as usize - 1;
    let mut report = IdentityReport::new("degree-depth", n);
    let size_law = universe.law(|s| s[idx].2);
    report.compare_pmf("|S| law vs Bernoulli(2/i) sum", &size_law, &bernoulli_sum_law(2, n, 2));

    let degree_law = universe.law(|s| s[idx].0);
    let mut geometric_min = Pmf::new();
    for (&s, &w) in &size_law {
        for d in 0..s {
            add(&mut geometric_min, d, w * Rational::new(1, 1i64 << (d + 1)));
        }
        add(&mut geometric_min, s, w * Rational::new(1, 1i64 << s));
    }
    report.compare_pmf("degree law vs min(G, |S|)", &degree_law, &geometric_min);

    let joint = universe.law(|s| (s[idx].0, s[idx].1));
    for k in 0..=n {
        for l in 0..=n {
            let left: Rational = joint.iter().filter(|((d, h), _)| *d >= k && *h <= l).map(|(_, &w)| w).sum();
            let right: Rational = size_law
                .iter()
                .filter(|(&s, _)| s >= k)
                .map(|(&s, &w)| w * binomial_at_most(s - k, l as i64))
                .sum::<Rational>()
                * Rational::new(1, 1i64 << k);
            report.compare(|| format!("P(d >= {k}, h <= {l})"), left, right);
        }
    }
    Ok(report)
}

/// The coalescent tree with original labels, seen through a fixed vertex or
/// as an unlabelled multiset, has the law of a uniform increasing tree with a
/// uniformly random label.
pub fn relabel_identities(universe: &ChainUniverse) -> Result<IdentityReport> {
    let n = universe.n;
    let mut report = IdentityReport::new("relabel", n);
    let uniform = uniform_label_law(n)?;
    for v in 0..n as usize {
        let law = universe.law(|s| (s[v].0, s[v].1));
        report.compare_pmf(&format!("(degree, depth) of vertex {}", v + 1), &law, &uniform);
    }
    let chain_multisets = universe.law(|s| {
        let mut m: Vec<(u32, u32)> = s.iter().map(|x| (x.0, x.1)).collect();
        m.sort_unstable();
        m
    });
    report.compare_pmf("multiset of (degree, depth)", &chain_multisets, &increasing_multiset_law(n)?);
    Ok(report)
}

/// The degree of vertex `i` in a uniform increasing tree has the law of
/// `sum_{j=i}^{n-1} Ber(1/j)`; the coalescent vertex degree is its average
/// over `i`.
pub fn degree_law_identities(universe: &ChainUniverse) -> Result<IdentityReport> {
    let n = universe.n;
    let mut report = IdentityReport::new("degree-law", n);
    let trees = enumerate_increasing_trees(n)?;
    let w = Rational::new(1, trees.len() as i64);
    let mut mixture = Pmf::new();
    for i in 1..=n {
        let mut law = Pmf::new();
        for t in &trees {
            add(&mut law, t.degrees()[i as usize], w);
        }
        let predicted = bernoulli_sum_law(i, n - 1, 1);
        report.compare_pmf(&format!("degree of tree vertex {i}"), &law, &predicted);
        for (k, p) in predicted {
            add(&mut mixture, k, p * Rational::new(1, n as i64));
        }
    }
    report.compare_pmf("coalescent degree vs label mixture", &universe.law(|s| s[0].0), &mixture);
    Ok(report)
}

/// `P(d(i) = m_i, i <= k) = sum_{S} (-1)^|S| P(d(i) >= m_i + 1{i in S}, i <= k)`
/// for the coalescent vertices `1..=k` and all `m` in `0..=n`.
pub fn inclusion_exclusion_identities(universe: &ChainUniverse, k: usize) -> Result<IdentityReport> {
    let n = universe.n;
    if k == 0 || k > n as usize {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    let mut report = IdentityReport::new("inclusion-exclusion", n);
    let degrees = universe.law(|s| s[..k].iter().map(|x| x.0).collect::<Vec<u32>>());
    let at_least = |m: &[u32]| -> Rational {
        degrees.iter().filter(|(d, _)| d.iter().zip(m).all(|(a, b)| a >= b)).map(|(_, &w)| w).sum()
    };
    let mut m = vec![0u32; k];
    loop {
        let direct = degrees.get(&m).copied().unwrap_or_else(zero);
        let mut alternating = zero();
        for subset in 0u32..(1 << k) {
            let shifted: Vec<u32> = (0..k).map(|i| m[i] + (subset >> i & 1)).collect();
            let sign = if subset.count_ones() % 2 == 0 { 1 } else { -1 };
            alternating += at_least(&shifted) * sign;
        }
        report.compare(|| format!("P(d = {m:?})"), direct, alternating);
        // next m in 0..=n per coordinate
        let mut i = 0;
        while i < k && m[i] == n {
            m[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        m[i] += 1;
    }
    Ok(report)
}

/// For tracked vertices `1..=k` and every cutoff `L`, the probability that
/// the selection sets restricted to steps above `L` equal a given pairwise
/// disjoint family `(J_i)` is `prod_{m > L} p_{m, sigma_m}`, where
/// `sigma_m` counts the `J_i` containing `m`.
pub fn selection_product_identities(universe: &ChainUniverse, k: usize) -> Result<IdentityReport> {
    let n = universe.n;
    if k == 0 || k > n as usize {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    let mut report = IdentityReport::new("selection-product", n);
    let w = universe.weight();
    for cutoff in 1..n {
        let mut law: Pmf<Vec<Vec<u32>>> = Pmf::new();
        for sel in &universe.selections {
            let key = sel[..k].iter().map(|s| s.iter().copied().filter(|&x| x > cutoff).collect()).collect();
            add(&mut law, key, w);
        }
        let steps: Vec<u32> = (cutoff + 1..=n).collect();
        // each step goes to one of the k sets or to none
        let mut assignment = vec![0usize; steps.len()];
        loop {
            let family: Vec<Vec<u32>> = (1..=k)
                .map(|i| {
                    let mut s: Vec<u32> =
                        steps.iter().zip(&assignment).filter(|(_, &a)| a == i).map(|(&m, _)| m).collect();
                    s.reverse();
                    s
                })
                .collect();
            let product: Rational = steps
                .iter()
                .zip(&assignment)
                .map(|(&m, &a)| {
                    let (m, kk) = (m as i64, k as i64);
                    if a == 0 {
                        Rational::new((m - kk) * (m - kk - 1), m * (m - 1))
                    } else {
                        Rational::new(2 * (m - kk), m * (m - 1))
                    }
                })
                .product();
            let enumerated = law.get(&family).copied().unwrap_or_else(zero);
            report.compare(|| format!("cutoff {cutoff}, sets {family:?}"), enumerated, product);
            let mut i = 0;
            while i < assignment.len() && assignment[i] == k {
                assignment[i] = 0;
                i += 1;
            }
            if i == assignment.len() {
                break;
            }
            assignment[i] += 1;
        }
    }
    Ok(report)
}

/// Floating-point cross-check of the one-step formulas against the exact ones.
pub fn ratio_formulas_agree(k: u32, m: u32) -> bool {
    let (mi, ki) = (m as i64, k as i64);
    let p0 = Rational::new((mi - ki) * (mi - ki - 1), mi * (mi - 1));
    let p1 = Rational::new(2 * (mi - ki), mi * (mi - 1));
    let f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
    (f(p0) - ratios::p0(m, k)).abs() < 1e-15 && (f(p1) - ratios::p1(m, k)).abs() < 1e-15
}

fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Golden data for sizes `2..=n_max`: counts, the exact `(degree, depth)`
/// law of vertex 1, and the law of `|S_n(1)|`.
pub fn golden_json(n_max: u32) -> Result<Value> {
    check_n(n_max, MAX_CHAIN_N)?;
    let mut sizes = Vec::new();
    for n in 2..=n_max {
        let u = ChainUniverse::build(n)?;
        let joint: Vec<Value> = u
            .law(|s| (s[0].0, s[0].1))
            .iter()
            .map(|(&(d, h), p)| json!({"degree": d, "depth": h, "p": rational_str(p)}))
            .collect();
        let sizes_law: Vec<Value> =
            u.law(|s| s[0].2).iter().map(|(&s, p)| json!({"size": s, "p": rational_str(p)})).collect();
        sizes.push(json!({
            "n": n,
            "chains": chain_count(n),
            "increasing_trees": factorial(n - 1),
            "degree_depth_vertex_1": joint,
            "selection_size_vertex_1": sizes_law,
        }));
    }
    Ok(json!({ "schema": crate::empirical::SCHEMA, "kind": "exact-laws", "sizes": sizes }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_count_means_by_enumeration() {
        for n in 1..=7 {
            let trees = enumerate_increasing_trees(n).unwrap();
            let cap = 3;
            let mut want = vec![0.0; cap + 1];
            for t in &trees {
                for &d in &t.degrees()[1..] {
                    want[(d as usize).min(cap)] += 1.0 / trees.len() as f64;
                }
            }
            let got = degree_count_means(n, cap as u32).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12, "n = {n}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_increasing_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_increasing_trees(2).unwrap().len(), 1);
        assert_eq!(enumerate_increasing_trees(4).unwrap().len(), 6);
        let t7 = enumerate_increasing_trees(7).unwrap();
        assert_eq!(t7.len(), 720);
        assert!(t7.iter().all(RecursiveTree::is_increasing));
        let distinct: BTreeSet<Vec<Label>> = t7.iter().map(|t| t.parent_slice().to_vec()).collect();
        assert_eq!(distinct.len(), 720);
        assert!(enumerate_increasing_trees(9).is_err());
        assert!(enumerate_increasing_trees(0).is_err());
    }

    #[test]
    fn chain_counts() {
        assert_eq!(enumerate_chains(2).unwrap().len(), 2);
        assert_eq!(enumerate_chains(3).unwrap().len(), 12);
        assert_eq!(enumerate_chains(4).unwrap().len(), 144);
        assert_eq!(chain_count(6), 86_400);
        assert!(enumerate_chains(7).is_err());
    }

    #[test]
    fn phi_small() {
        for n in 1..=4 {
            let r = verify_phi(n).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.min_fiber as i64, factorial(n));
        }
        let r = verify_phi(4).unwrap();
        assert_eq!((r.chains, r.trees, r.max_fiber), (144, 6, 24));
        assert!(verify_phi(6).is_err());
    }

    #[test]
    fn two_vertex_law() {
        let law = exact_degree_depth_law(2, 1).unwrap();
        let half = Rational::new(1, 2);
        assert_eq!(law, Pmf::from([((0, 1), half), ((1, 0), half)]));
    }

    #[test]
    fn three_vertex_selection_law() {
        let u = ChainUniverse::build(3).unwrap();
        let law = u.law(|s| s[2].2);
        assert_eq!(law[&2], Rational::new(2, 3));
        assert_eq!(law[&1], Rational::new(1, 3));
    }

    #[test]
    fn identities_up_to_five() {
        for n in 2..=5 {
            let u = ChainUniverse::build(n).unwrap();
            for v in 1..=n {
                let r = degree_depth_identities(&u, v).unwrap();
                assert!(r.passed(), "{:?}", r.mismatches.first());
            }
            assert!(relabel_identities(&u).unwrap().passed());
            assert!(degree_law_identities(&u).unwrap().passed());
            for k in 1..=n.min(3) as usize {
                assert!(inclusion_exclusion_identities(&u, k).unwrap().passed());
                let r = selection_product_identities(&u, k).unwrap();
                assert!(r.passed(), "{:?}", r.mismatches.first());
            }
        }
    }

    #[test]
    fn bernoulli_sums() {
        // sum of Ber(1/1) is 1 surely
        assert_eq!(bernoulli_sum_law(1, 1, 1), Pmf::from([(1, Rational::from_integer(1))]));
        let law = bernoulli_sum_law(2, 3, 1);
        assert_eq!(law[&0], Rational::new(1, 3));
        assert_eq!(law[&1], Rational::new(1, 2));
        assert_eq!(law[&2], Rational::new(1, 6));
        assert_eq!(binomial_at_most(3, 1), Rational::new(1, 2));
        assert_eq!(binomial_at_most(0, 0), Rational::from_integer(1));
        assert_eq!(binomial_at_most(4, -1), zero());
    }

    #[test]
    fn ratio_formulas() {
        for k in 2..=4 {
            for m in k + 2..60 {
                assert!(ratio_formulas_agree(k, m));
            }
        }
    }
}
