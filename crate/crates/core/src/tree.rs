//! Rooted labelled trees on `{1..n}` stored as parent arrays.
//!
//! Degree follows the convention used throughout this crate: the degree of a
//! vertex is its number of **children**, not its number of incident edges.
//! The root has depth 0.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Vertex label. Labels run from 1 to `n`.
pub type Label = u32;

const NO_PARENT: Label = 0;

/// A rooted tree on the labels `1..=n`.
///
/// `parent[v]` is the parent label of `v`, and `parent[root] == 0`. Slot 0 of
/// the array is unused so that labels index the array directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RecursiveTree {
    parent: Vec<Label>,
    root: Label,
}

/// Degree (child count) and depth of a single vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexStats {
    pub vertex: Label,
    pub degree: u32,
    pub depth: u32,
}

impl RecursiveTree {
    /// The one-vertex tree.
    pub fn singleton() -> Self {
        Self { parent: vec![NO_PARENT; 2], root: 1 }
    }

    /// Builds a tree from `parent` (length `n + 1`, slot 0 ignored) and checks
    /// that it is a single rooted tree.
    pub fn from_parents(mut parent: Vec<Label>, root: Label) -> Result<Self> {
        if parent.len() < 2 {
            return invalid("a tree needs at least one vertex");
        }
        let n = (parent.len() - 1) as Label;
        if root == 0 || root > n {
            return invalid(format!("root {root} outside 1..={n}"));
        }
        parent[0] = NO_PARENT;
        if parent[root as usize] != NO_PARENT {
            return invalid(format!("root {root} has a parent"));
        }
        for v in 1..=n {
            let p = parent[v as usize];
            if v == root {
                continue;
            }
            if p == NO_PARENT || p > n || p == v {
                return invalid(format!("vertex {v} has invalid parent {p}"));
            }
        }
        let tree = Self { parent, root };
        // 0 = unvisited, 1 = on current path, 2 = reaches root
        let mut state = vec![0u8; tree.parent.len()];
        state[root as usize] = 2;
        let mut path = Vec::new();
        for v in 1..=n {
            let mut u = v;
            while state[u as usize] == 0 {
                state[u as usize] = 1;
                path.push(u);
                u = tree.parent[u as usize];
            }
            if state[u as usize] == 1 {
                return invalid(format!("parent links from {v} contain a cycle"));
            }
            for w in path.drain(..) {
                state[w as usize] = 2;
            }
        }
        Ok(tree)
    }

    /// Builds an increasing tree rooted at 1 from `parents[k] = parent of k + 2`.
    pub fn from_increasing_parents(parents: &[Label]) -> Result<Self> {
        let mut parent = Vec::with_capacity(parents.len() + 2);
        parent.extend_from_slice(&[NO_PARENT, NO_PARENT]);
        for (k, &p) in parents.iter().enumerate() {
            let v = k as Label + 2;
            if p == 0 || p >= v {
                return invalid(format!("vertex {v} needs a parent in 1..{v}, got {p}"));
            }
            parent.push(p);
        }
        Ok(Self { parent, root: 1 })
    }

    pub fn n(&self) -> u32 {
        (self.parent.len() - 1) as u32
    }

    pub fn root(&self) -> Label {
        self.root
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent(&self, v: Label) -> Option<Label> {
        match self.parent[v as usize] {
            NO_PARENT => None,
            p => Some(p),
        }
    }

    /// Raw parent slice, indexed by label (slot 0 and the root hold 0).
    pub fn parent_slice(&self) -> &[Label] {
        &self.parent
    }

    /// True when labels increase along every root-to-leaf path.
    pub fn is_increasing(&self) -> bool {
        self.root == 1 && (2..=self.n()).all(|v| self.parent[v as usize] < v)
    }

    /// Child counts indexed by label (slot 0 unused).
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.parent.len()];
        self.degrees_into(&mut deg);
        deg
    }

    /// Child counts written into `deg`, which is resized as needed.
    pub fn degrees_into(&self, deg: &mut Vec<u32>) {
        deg.clear();
        deg.resize(self.parent.len(), 0);
        for &p in &self.parent[1..] {
            deg[p as usize] += 1;
        }
        deg[0] = 0;
    }

    /// Depths indexed by label (slot 0 unused).
    pub fn depths(&self) -> Vec<u32> {
        let n = self.parent.len();
        let mut depth = vec![u32::MAX; n];
        depth[self.root as usize] = 0;
        if self.is_increasing() {
            for v in 2..n {
                depth[v] = depth[self.parent[v] as usize] + 1;
            }
            return depth;
        }
        let mut stack = Vec::new();
        for v in 1..n as Label {
            let mut u = v;
            while depth[u as usize] == u32::MAX {
                stack.push(u);
                u = self.parent[u as usize];
            }
            let mut d = depth[u as usize];
            while let Some(w) = stack.pop() {
                d += 1;
                depth[w as usize] = d;
            }
        }
        depth[0] = 0;
        depth
    }

    /// Depth of one vertex by walking to the root.
    pub fn depth_of(&self, v: Label) -> u32 {
        let mut d = 0;
        let mut u = v;
        while self.parent[u as usize] != NO_PARENT {
            u = self.parent[u as usize];
            d += 1;
        }
        d
    }

    /// Applies the bijection `relabel` (indexed by old label, slot 0 unused) to
    /// every vertex.
    pub fn relabel(&self, relabel: &[Label]) -> Result<Self> {
        if relabel.len() != self.parent.len() {
            return invalid("relabelling has the wrong length");
        }
        let mut parent = vec![NO_PARENT; self.parent.len()];
        for v in 1..self.parent.len() {
            let p = self.parent[v];
            let new_p = if p == NO_PARENT { NO_PARENT } else { relabel[p as usize] };
            parent[relabel[v] as usize] = new_p;
        }
        Self::from_parents(parent, relabel[self.root as usize])
    }
}

/// Grows a random recursive tree: vertex `k + 1` attaches to a uniform vertex
/// of `{1..k}`, independently for each `k`.
pub fn grow_rrt<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<RecursiveTree> {
    let mut tree = RecursiveTree::singleton();
    grow_rrt_into(&mut tree, n, rng)?;
    Ok(tree)
}

/// [`grow_rrt`] reusing the allocation of `tree`.
pub fn grow_rrt_into<R: Rng + ?Sized>(tree: &mut RecursiveTree, n: u32, rng: &mut R) -> Result<()> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let parent = &mut tree.parent;
    parent.clear();
    parent.reserve(n as usize + 1);
    parent.extend_from_slice(&[NO_PARENT, NO_PARENT]);
    for v in 2..=n {
        parent.push(rng.random_range(1..v));
    }
    tree.root = 1;
    Ok(())
}

/// One record per vertex, in label order.
pub fn stats(tree: &RecursiveTree) -> Vec<VertexStats> {
    let deg = tree.degrees();
    let depth = tree.depths();
    (1..=tree.n()).map(|v| VertexStats { vertex: v, degree: deg[v as usize], depth: depth[v as usize] }).collect()
}

/// Maximum degree and the sorted set of vertices attaining it.
pub fn max_degree_set(tree: &RecursiveTree) -> (u32, Vec<Label>) {
    max_degree_set_of(&tree.degrees())
}

/// [`max_degree_set`] on a precomputed degree array (slot 0 ignored).
pub fn max_degree_set_of(deg: &[u32]) -> (u32, Vec<Label>) {
    let max = deg[1..].iter().copied().max().unwrap_or(0);
    let set = (1..deg.len()).filter(|&v| deg[v] == max).map(|v| v as Label).collect();
    (max, set)
}

/// Vertices in decreasing order of degree, with ties broken by a uniformly
/// random permutation drawn from `rng`. Returns `(degree, depth)` pairs.
pub fn ordered_degree_depth<R: Rng + ?Sized>(tree: &RecursiveTree, rng: &mut R) -> Vec<(u32, u32)> {
    let mut records = stats(tree);
    records.shuffle(rng);
    // stable sort keeps the shuffled order inside each degree class
    records.sort_by_key(|r| std::cmp::Reverse(r.degree));
    records.into_iter().map(|s| (s.degree, s.depth)).collect()
}
