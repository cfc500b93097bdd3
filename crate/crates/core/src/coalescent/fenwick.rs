/// Fenwick tree over `{1..n}` holding 0/1 marks, with k-th mark search.
#[derive(Debug, Clone)]
pub(crate) struct MarkSet {
    tree: Vec<u32>,
    top_bit: usize,
}

impl MarkSet {
    /// All of `1..=n` marked.
    pub(crate) fn full(n: usize) -> Self {
        let mut tree = vec![0u32; n + 1];
        for i in 1..=n {
            tree[i] += 1;
            let j = i + (i & i.wrapping_neg());
            if j <= n {
                tree[j] += tree[i];
            }
        }
        let top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Self { tree, top_bit }
    }

    pub(crate) fn unmark(&mut self, mut i: usize) {
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Position of the `k`-th mark (1-based). `k` must not exceed the count.
    pub(crate) fn kth(&self, mut k: u32) -> usize {
        let mut pos = 0;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] < k {
                pos = next;
                k -= self.tree[next];
            }
            step >>= 1;
        }
        pos + 1
    }

    /// Number of marks in `1..=i`.
    #[cfg(test)]
    pub(crate) fn rank(&self, mut i: usize) -> u32 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }
}

/// Union-find over labels with union by size and path halving.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..=n as u32).collect(), size: vec![1; n + 1] }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Merges the sets with representatives `a` and `b`; returns the new one.
    pub(crate) fn union_roots(&mut self, a: u32, b: u32) -> u32 {
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] { (a, b) } else { (b, a) };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        big
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kth_tracks_unmarks() {
        for n in 1..40usize {
            let mut m = MarkSet::full(n);
            let mut live: Vec<usize> = (1..=n).collect();
            let mut x = 7usize;
            while live.len() > 1 {
                for (k, &v) in live.iter().enumerate() {
                    assert_eq!(m.kth(k as u32 + 1), v);
                    assert_eq!(m.rank(v), k as u32 + 1);
                }
                x = (x * 31 + 3) % live.len();
                m.unmark(live.remove(x));
            }
        }
    }

    #[test]
    fn dsu_merges() {
        let mut d = Dsu::new(6);
        let r = d.union_roots(1, 2);
        let r2 = d.union_roots(r, 5);
        assert_eq!(d.find(1), r2);
        assert_eq!(d.find(5), r2);
        assert_ne!(d.find(3), r2);
    }
}
