//! Parallel tournament tree used to peel prefix-minimum frontiers.
//!
//! Implicit layout: node `1` is the root, node `i` has children `2i` and
//! `2i + 1`, and the `leaves` (a power of two) leaves occupy
//! `[leaves, 2 * leaves)`. Leaf `leaves + j` holds object `j`; padding
//! leaves and removed objects hold [`INF`]. Every internal node stores the
//! minimum of its children.

use crate::par::{self, DisjointSlice, GRAIN};
use crate::{Error, Result};

/// Tombstone and padding value.
pub const INF: i64 = i64::MAX;

#[derive(Clone, Debug)]
pub struct TournamentTree {
    tree: Vec<i64>,
    leaves: usize,
    n: usize,
    /// Per-node effective sizes of the pending frontier; allocated on the
    /// first marking pass.
    counts: Vec<u32>,
    pending: Option<usize>,
    visits: u64,
    last_visits: u64,
}

#[inline]
fn subtree_leaves(i: usize, leaves: usize) -> usize {
    let depth = usize::BITS - 1 - i.leading_zeros();
    leaves >> depth
}

impl TournamentTree {
    pub fn build(values: &[i64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = values.iter().position(|&v| v == INF) {
            return Err(Error::SentinelValue { index: i, value: INF });
        }
        let n = values.len();
        let leaves = n.next_power_of_two();
        let mut tree = vec![INF; 2 * leaves];
        tree[leaves..leaves + n].copy_from_slice(values);
        // Fill internal levels bottom-up; each level is one parallel sweep.
        let mut width = leaves / 2;
        while width >= 1 {
            let (upper, lower) = tree.split_at_mut(2 * width);
            let children = &lower[..2 * width];
            par::for_each_indexed_mut(&mut upper[width..], |k, slot| {
                *slot = children[2 * k].min(children[2 * k + 1]);
            });
            width /= 2;
        }
        Ok(TournamentTree { tree, leaves, n, counts: Vec::new(), pending: None, visits: 0, last_visits: 0 })
    }

    /// Logical number of objects.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of leaf slots including padding.
    pub fn leaf_slots(&self) -> usize {
        self.leaves
    }

    pub fn root_min(&self) -> i64 {
        self.tree[1]
    }

    pub fn is_exhausted(&self) -> bool {
        self.tree[1] == INF
    }

    /// Value stored at node `i` (1-based implicit index).
    pub fn node(&self, i: usize) -> i64 {
        self.tree[i]
    }

    /// Current value of object `j`, or `None` once removed.
    pub fn leaf(&self, j: usize) -> Option<i64> {
        let v = self.tree[self.leaves + j];
        (v != INF).then_some(v)
    }

    /// Total prefix-min invocations so far.
    pub fn visits(&self) -> u64 {
        self.visits
    }

    /// Prefix-min invocations of the most recent round.
    pub fn last_round_visits(&self) -> u64 {
        self.last_visits
    }

    /// Finds every current prefix-min leaf (a live leaf no larger than all
    /// live leaves before it), writes `round` into `ranks` for it, removes
    /// it, and returns how many were removed.
    ///
    /// Panics if the tree is exhausted or a marked frontier is pending.
    pub fn process_frontier(&mut self, round: u32, ranks: &mut [u32]) -> usize {
        assert!(!self.is_exhausted(), "process_frontier on an exhausted tree");
        assert!(self.pending.is_none(), "a marked frontier is pending");
        assert_eq!(ranks.len(), self.n);
        let leaves = self.leaves;
        let t = DisjointSlice::new(&mut self.tree);
        let r = DisjointSlice::new(ranks);
        let (visits, removed) = prefix_min(&t, &r, 1, INF, leaves, round);
        self.record(visits);
        removed
    }

    /// First pass of the two-pass frontier extraction: marks this round's
    /// prefix-min leaves and stores each subtree's effective size. The tree
    /// values are left untouched until [`remove_frontier`](Self::remove_frontier).
    pub fn mark_frontier(&mut self) -> usize {
        assert!(!self.is_exhausted(), "mark_frontier on an exhausted tree");
        if self.counts.len() != self.tree.len() {
            self.counts = vec![0; self.tree.len()];
        }
        let leaves = self.leaves;
        let c = DisjointSlice::new(&mut self.counts);
        let (visits, m) = mark(&self.tree, &c, 1, INF, leaves);
        self.record(visits);
        self.pending = Some(m);
        m
    }

    /// Indices of the marked frontier in increasing order, written into
    /// disjoint output slots by a second traversal.
    pub fn collect_frontier(&self) -> Vec<usize> {
        let m = self.pending.expect("collect_frontier requires a marked frontier");
        let mut out = vec![0usize; m];
        let o = DisjointSlice::new(&mut out);
        collect(&self.counts, &o, 1, 0, self.leaves);
        out
    }

    /// Removes the marked frontier, assigning `round` to each member.
    pub fn remove_frontier(&mut self, round: u32, ranks: &mut [u32]) -> usize {
        let m = self.pending.take().expect("remove_frontier requires a marked frontier");
        assert_eq!(ranks.len(), self.n);
        let leaves = self.leaves;
        let t = DisjointSlice::new(&mut self.tree);
        let r = DisjointSlice::new(ranks);
        remove(&t, &self.counts, &r, 1, leaves, round);
        m
    }

    /// Mark, collect and remove in one call.
    pub fn process_frontier_collect(&mut self, round: u32, ranks: &mut [u32]) -> Vec<usize> {
        self.mark_frontier();
        let f = self.collect_frontier();
        self.remove_frontier(round, ranks);
        f
    }

    fn record(&mut self, visits: u64) {
        self.visits += visits;
        self.last_visits = visits;
    }

    /// Checks that every internal node equals the minimum of its children.
    pub fn audit(&self) -> std::result::Result<(), String> {
        for i in 1..self.leaves {
            let want = self.tree[2 * i].min(self.tree[2 * i + 1]);
            if self.tree[i] != want {
                return Err(format!("node {i} holds {} but children min is {want}", self.tree[i]));
            }
        }
        if let Some(j) = (self.n..self.leaves).find(|&j| self.tree[self.leaves + j] != INF) {
            return Err(format!("padding leaf {j} is live"));
        }
        Ok(())
    }
}

/// Whether a subtree with minimum `v` can hold a prefix-min leaf under `bound`.
#[inline]
fn live(v: i64, bound: i64) -> bool {
    v != INF && v <= bound
}

fn prefix_min(
    t: &DisjointSlice<i64>,
    ranks: &DisjointSlice<u32>,
    i: usize,
    lmin: i64,
    leaves: usize,
    round: u32,
) -> (u64, usize) {
    // SAFETY: each call owns the subtree rooted at `i`; siblings are disjoint.
    unsafe {
        let v = t.get(i);
        if v == INF || v > lmin {
            return (1, 0);
        }
        if i >= leaves {
            ranks.set(i - leaves, round);
            t.set(i, INF);
            return (1, 1);
        }
        let left_min = t.get(2 * i);
        let right_bound = lmin.min(left_min);
        let fork = subtree_leaves(i, leaves) > GRAIN && live(left_min, lmin) && live(t.get(2 * i + 1), right_bound);
        let ((vl, ml), (vr, mr)) = par::join_if(
            fork,
            || prefix_min(t, ranks, 2 * i, lmin, leaves, round),
            || prefix_min(t, ranks, 2 * i + 1, right_bound, leaves, round),
        );
        t.set(i, t.get(2 * i).min(t.get(2 * i + 1)));
        (vl + vr + 1, ml + mr)
    }
}

fn mark(t: &[i64], counts: &DisjointSlice<u32>, i: usize, lmin: i64, leaves: usize) -> (u64, usize) {
    let v = t[i];
    // SAFETY: each call writes only `counts[i]` of its own subtree root.
    unsafe {
        if v == INF || v > lmin {
            counts.set(i, 0);
            return (1, 0);
        }
        if i >= leaves {
            counts.set(i, 1);
            return (1, 1);
        }
        let right_bound = lmin.min(t[2 * i]);
        let fork = subtree_leaves(i, leaves) > GRAIN && live(t[2 * i], lmin) && live(t[2 * i + 1], right_bound);
        let ((vl, ml), (vr, mr)) = par::join_if(
            fork,
            || mark(t, counts, 2 * i, lmin, leaves),
            || mark(t, counts, 2 * i + 1, right_bound, leaves),
        );
        counts.set(i, (ml + mr) as u32);
        (vl + vr + 1, ml + mr)
    }
}

fn collect(counts: &[u32], out: &DisjointSlice<usize>, i: usize, offset: usize, leaves: usize) {
    if counts[i] == 0 {
        return;
    }
    if i >= leaves {
        // SAFETY: slot `offset` belongs to this leaf alone.
        unsafe { out.set(offset, i - leaves) };
        return;
    }
    let left = counts[2 * i] as usize;
    par::join_if(
        subtree_leaves(i, leaves) > GRAIN && left > 0 && counts[2 * i + 1] > 0,
        || collect(counts, out, 2 * i, offset, leaves),
        || collect(counts, out, 2 * i + 1, offset + left, leaves),
    );
}

fn remove(t: &DisjointSlice<i64>, counts: &[u32], ranks: &DisjointSlice<u32>, i: usize, leaves: usize, round: u32) {
    if counts[i] == 0 {
        return;
    }
    // SAFETY: as in `prefix_min`, subtrees are owned by one call each.
    unsafe {
        if i >= leaves {
            ranks.set(i - leaves, round);
            t.set(i, INF);
            return;
        }
        par::join_if(
            subtree_leaves(i, leaves) > GRAIN && counts[2 * i] > 0 && counts[2 * i + 1] > 0,
            || remove(t, counts, ranks, 2 * i, leaves, round),
            || remove(t, counts, ranks, 2 * i + 1, leaves, round),
        );
        t.set(i, t.get(2 * i).min(t.get(2 * i + 1)));
    }
}
