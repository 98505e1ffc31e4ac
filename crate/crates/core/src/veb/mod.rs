//! Van Emde Boas ordered set over the universe `[0, 2^bits)`.
//!
//! A node keeps `min` and `max` outside its clusters; every other key `x`
//! lives as `low(x)` in `clusters[high(x)]`, and `summary` holds the highs of
//! the nonempty clusters. With `lb = ceil(bits / 2)`, `high(x) = x >> lb`,
//! `low(x) = x mod 2^lb`, so clusters span `lb` bits and the summary spans
//! `bits - lb`. A one-bit node is a leaf holding only `min`/`max`.
//!
//! Sorted batches are inserted, deleted, and range-reported in parallel by
//! [`VebTree::batch_insert`], [`VebTree::batch_delete`], and
//! [`VebTree::range_query`].

mod delete;
mod insert;
mod range;

pub use delete::SurvivorMaps;

use crate::baselines::{SetAnswer, SetOp};
use crate::par;
use crate::{Error, Result};

/// Universe width accepted by [`VebTree::new`].
pub const DEFAULT_MAX_BITS: u32 = 32;
/// Widest universe accepted by [`VebTree::with_limit`].
pub const HARD_MAX_BITS: u32 = 40;

/// Minimum number of batch keys under a node before its clusters are
/// processed in parallel.
const PAR_KEYS: usize = 512;

type Slot = Option<Box<VebTree>>;

#[derive(Clone, Debug)]
pub struct VebTree {
    bits: u32,
    min: Option<u64>,
    max: Option<u64>,
    summary: Option<Box<VebTree>>,
    /// Empty until the first key is pushed below this node.
    clusters: Vec<Slot>,
}

/// A run of batch positions `[start, end)` sharing the high part `h`.
#[derive(Clone, Copy, Debug)]
struct Group {
    h: u64,
    start: usize,
    end: usize,
}

impl VebTree {
    pub fn new(bits: u32) -> Result<Self> {
        Self::with_limit(bits, DEFAULT_MAX_BITS)
    }

    /// Like [`new`](Self::new) with a caller-chosen width cap, itself at
    /// most [`HARD_MAX_BITS`].
    pub fn with_limit(bits: u32, limit: u32) -> Result<Self> {
        let limit = limit.min(HARD_MAX_BITS);
        if bits == 0 {
            return Err(Error::InvalidParameter("universe needs at least one bit".into()));
        }
        if bits > limit {
            return Err(Error::UniverseTooLarge { bits, limit });
        }
        Ok(Self::empty(bits))
    }

    fn empty(bits: u32) -> Self {
        VebTree { bits, min: None, max: None, summary: None, clusters: Vec::new() }
    }

    fn singleton(bits: u32, x: u64) -> Self {
        VebTree { min: Some(x), max: Some(x), ..Self::empty(bits) }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn universe(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.min.is_none()
    }

    pub fn min(&self) -> Option<u64> {
        self.min
    }

    pub fn max(&self) -> Option<u64> {
        self.max
    }

    #[inline]
    fn low_bits(&self) -> u32 {
        self.bits.div_ceil(2)
    }

    #[inline]
    fn high(&self, x: u64) -> u64 {
        x >> self.low_bits()
    }

    #[inline]
    fn low(&self, x: u64) -> u64 {
        x & ((1u64 << self.low_bits()) - 1)
    }

    #[inline]
    fn index(&self, h: u64, l: u64) -> u64 {
        (h << self.low_bits()) | l
    }

    fn check_key(&self, x: u64) -> Result<()> {
        if x >= self.universe() {
            return Err(Error::OutOfUniverse { key: x, universe: self.universe() });
        }
        Ok(())
    }

    /// True when no key is stored below `min`/`max`.
    fn inner_empty(&self) -> bool {
        self.summary.as_ref().is_none_or(|s| s.is_empty())
    }

    fn cluster(&self, h: u64) -> Option<&VebTree> {
        self.clusters.get(h as usize).and_then(|c| c.as_deref()).filter(|c| !c.is_empty())
    }

    fn ensure_clusters(&mut self) {
        if self.clusters.is_empty() {
            let n = 1usize << (self.bits - self.low_bits());
            self.clusters.resize_with(n, || None);
        }
    }

    fn summary_mut(&mut self) -> &mut VebTree {
        let hb = self.bits - self.low_bits();
        self.summary.get_or_insert_with(|| Box::new(VebTree::empty(hb)))
    }

    pub fn member(&self, x: u64) -> Result<bool> {
        self.check_key(x)?;
        Ok(self.member_raw(x))
    }

    pub(crate) fn member_raw(&self, x: u64) -> bool {
        if self.min == Some(x) || self.max == Some(x) {
            return true;
        }
        if self.bits == 1 || self.is_empty() {
            return false;
        }
        self.cluster(self.high(x)).is_some_and(|c| c.member_raw(self.low(x)))
    }

    /// Largest key strictly below `x`.
    pub fn predecessor(&self, x: u64) -> Result<Option<u64>> {
        self.check_key(x)?;
        Ok(self.pred_raw(x, &mut 0))
    }

    /// Smallest key strictly above `x`.
    pub fn successor(&self, x: u64) -> Result<Option<u64>> {
        self.check_key(x)?;
        Ok(self.succ_raw(x, &mut 0))
    }

    pub(crate) fn succ_raw(&self, x: u64, visits: &mut u64) -> Option<u64> {
        *visits += 1;
        let min = self.min?;
        if x < min {
            return Some(min);
        }
        let max = self.max?;
        if x >= max {
            return None;
        }
        if self.bits == 1 {
            return Some(max);
        }
        let (h, l) = (self.high(x), self.low(x));
        if let Some(c) = self.cluster(h) {
            if Some(l) < c.max {
                return c.succ_raw(l, visits).map(|s| self.index(h, s));
            }
        }
        if let Some(s) = &self.summary {
            if let Some(h2) = s.succ_raw(h, visits) {
                return self.cluster(h2).and_then(|c| c.min).map(|l2| self.index(h2, l2));
            }
        }
        Some(max)
    }

    pub(crate) fn pred_raw(&self, x: u64, visits: &mut u64) -> Option<u64> {
        *visits += 1;
        let max = self.max?;
        if x > max {
            return Some(max);
        }
        let min = self.min?;
        if x <= min {
            return None;
        }
        if self.bits == 1 {
            return Some(min);
        }
        let (h, l) = (self.high(x), self.low(x));
        if let Some(c) = self.cluster(h) {
            if c.min.is_some_and(|m| l > m) {
                return c.pred_raw(l, visits).map(|p| self.index(h, p));
            }
        }
        if let Some(s) = &self.summary {
            if let Some(h2) = s.pred_raw(h, visits) {
                return self.cluster(h2).and_then(|c| c.max).map(|l2| self.index(h2, l2));
            }
        }
        Some(min)
    }

    /// Inserts `x`; returns `false` if it was already present.
    pub fn insert(&mut self, x: u64) -> Result<bool> {
        self.check_key(x)?;
        if self.member_raw(x) {
            return Ok(false);
        }
        self.insert_raw(x, &mut 0);
        Ok(true)
    }

    /// Removes `x`; returns `false` if it was absent.
    pub fn delete(&mut self, x: u64) -> Result<bool> {
        self.check_key(x)?;
        if !self.member_raw(x) {
            return Ok(false);
        }
        self.delete_raw(x, &mut 0);
        Ok(true)
    }

    /// Requires `x` absent.
    pub(crate) fn insert_raw(&mut self, x: u64, visits: &mut u64) {
        *visits += 1;
        let (Some(min), Some(max)) = (self.min, self.max) else {
            self.min = Some(x);
            self.max = Some(x);
            return;
        };
        if min == max {
            if x < min {
                self.min = Some(x);
            } else {
                self.max = Some(x);
            }
            return;
        }
        let mut x = x;
        if x < min {
            self.min = Some(x);
            x = min;
        } else if x > max {
            self.max = Some(x);
            x = max;
        }
        debug_assert!(self.bits > 1);
        let (h, l) = (self.high(x), self.low(x));
        let cb = self.low_bits();
        self.ensure_clusters();
        match &mut self.clusters[h as usize] {
            Some(c) if !c.is_empty() => c.insert_raw(l, visits),
            slot => {
                *slot = Some(Box::new(VebTree::singleton(cb, l)));
                self.summary_mut().insert_raw(h, visits);
            }
        }
    }

    /// Requires `x` present.
    pub(crate) fn delete_raw(&mut self, x: u64, visits: &mut u64) {
        *visits += 1;
        let (min, max) = (self.min.unwrap(), self.max.unwrap());
        if min == max {
            self.min = None;
            self.max = None;
            return;
        }
        if x == min || x == max {
            if self.inner_empty() {
                let other = if x == min { max } else { min };
                self.min = Some(other);
                self.max = Some(other);
                return;
            }
            let s = self.summary.as_ref().unwrap();
            let (h, l) = if x == min {
                let h = s.min.unwrap();
                (h, self.cluster(h).unwrap().min.unwrap())
            } else {
                let h = s.max.unwrap();
                (h, self.cluster(h).unwrap().max.unwrap())
            };
            self.remove_inner(h, l, visits);
            let y = Some(self.index(h, l));
            if x == min {
                self.min = y;
            } else {
                self.max = y;
            }
            return;
        }
        self.remove_inner(self.high(x), self.low(x), visits);
    }

    fn remove_inner(&mut self, h: u64, l: u64, visits: &mut u64) {
        let c = self.clusters[h as usize].as_mut().unwrap();
        c.delete_raw(l, visits);
        if c.is_empty() {
            self.clusters[h as usize] = None;
            self.summary.as_mut().unwrap().delete_raw(h, visits);
        }
    }

    /// All keys in increasing order.
    pub fn keys(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.keys_into(0, &mut out);
        out
    }

    fn keys_into(&self, base: u64, out: &mut Vec<u64>) {
        let Some(min) = self.min else { return };
        out.push(base + min);
        if let Some(s) = &self.summary {
            for h in s.keys() {
                if let Some(c) = self.cluster(h) {
                    c.keys_into(base + self.index(h, 0), out);
                }
            }
        }
        if self.max != self.min {
            out.push(base + self.max.unwrap());
        }
    }

    /// Keys of the summary, i.e. the highs of nonempty clusters.
    pub fn summary_keys(&self) -> Vec<u64> {
        self.summary.as_ref().map(|s| s.keys()).unwrap_or_default()
    }

    /// Keys stored in `cluster[h]`, as low parts.
    pub fn cluster_keys(&self, h: u64) -> Vec<u64> {
        self.cluster(h).map(|c| c.keys()).unwrap_or_default()
    }

    /// Walks the whole structure and checks every representation invariant.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let u = self.universe();
        match (self.min, self.max) {
            (None, None) => {
                if !self.inner_empty() {
                    return Err(format!("empty {}-bit node has inner keys", self.bits));
                }
                return Ok(());
            }
            (Some(a), Some(b)) if a <= b && b < u => {}
            (a, b) => return Err(format!("bad min/max {a:?}/{b:?} in {}-bit node", self.bits)),
        }
        let (min, max) = (self.min.unwrap(), self.max.unwrap());
        if self.bits == 1 {
            if self.summary.is_some() || !self.clusters.is_empty() {
                return Err("one-bit node has children".into());
            }
            return Ok(());
        }
        if min == max && !self.inner_empty() {
            return Err(format!("singleton node {min} has inner keys"));
        }
        let highs = self.summary_keys();
        if let Some(s) = &self.summary {
            if s.bits != self.bits - self.low_bits() {
                return Err("summary width mismatch".into());
            }
            s.audit()?;
        }
        for (h, slot) in self.clusters.iter().enumerate() {
            let Some(c) = slot else { continue };
            if c.bits != self.low_bits() {
                return Err("cluster width mismatch".into());
            }
            if c.is_empty() != highs.binary_search(&(h as u64)).is_err() {
                return Err(format!("summary disagrees with cluster {h}"));
            }
            c.audit()?;
            for l in c.keys() {
                let x = self.index(h as u64, l);
                if x <= min || x >= max {
                    return Err(format!("inner key {x} outside ({min}, {max})"));
                }
            }
        }
        if highs.iter().any(|&h| self.cluster(h).is_none()) {
            return Err("summary names an empty cluster".into());
        }
        Ok(())
    }

    /// Runs `f` on the cluster slot of every group, in parallel for large
    /// batches. `slots[0]` corresponds to high `base`.
    fn for_groups<F>(slots: &mut [Slot], base: u64, groups: &[Group], f: &F) -> u64
    where
        F: Fn(&mut Slot, &Group) -> u64 + Sync,
    {
        match groups {
            [] => 0,
            [g] => f(&mut slots[(g.h - base) as usize], g),
            _ => {
                let mid = groups.len() / 2;
                let split = groups[mid].h;
                let (left, right) = slots.split_at_mut((split - base) as usize);
                let keys = groups[groups.len() - 1].end - groups[0].start;
                let (a, b) = par::join_if(
                    keys >= PAR_KEYS,
                    || Self::for_groups(left, base, &groups[..mid], f),
                    || Self::for_groups(right, split, &groups[mid..], f),
                );
                a + b
            }
        }
    }

    fn group_by_high(&self, keys: &[u64]) -> Vec<Group> {
        let mut groups: Vec<Group> = Vec::new();
        for (i, &x) in keys.iter().enumerate() {
            let h = self.high(x);
            match groups.last_mut() {
                Some(g) if g.h == h => g.end = i + 1,
                _ => groups.push(Group { h, start: i, end: i + 1 }),
            }
        }
        groups
    }

    fn check_batch(&self, keys: &[u64]) -> Result<()> {
        for (i, &x) in keys.iter().enumerate() {
            self.check_key(x)?;
            if i > 0 && keys[i - 1] >= x {
                return Err(Error::UnsortedBatch(i));
            }
        }
        Ok(())
    }
}

/// Replays a script on `tree` with the same answers as
/// [`oracle_sorted_set`](crate::baselines::oracle_sorted_set).
pub fn replay(tree: &mut VebTree, script: &[SetOp]) -> Result<Vec<SetAnswer>> {
    script
        .iter()
        .map(|op| {
            Ok(match op {
                SetOp::Insert(x) => {
                    tree.insert(*x)?;
                    SetAnswer::Done
                }
                SetOp::Delete(x) => {
                    tree.delete(*x)?;
                    SetAnswer::Done
                }
                SetOp::BatchInsert(b) => {
                    tree.batch_insert(b)?;
                    SetAnswer::Done
                }
                SetOp::BatchDelete(b) => {
                    tree.batch_delete(b)?;
                    SetAnswer::Done
                }
                SetOp::Member(x) => SetAnswer::Bool(tree.member(*x)?),
                SetOp::Min => SetAnswer::Key(tree.min()),
                SetOp::Max => SetAnswer::Key(tree.max()),
                SetOp::Pred(x) => SetAnswer::Key(tree.predecessor(*x)?),
                SetOp::Succ(x) => SetAnswer::Key(tree.successor(*x)?),
                SetOp::Range(l, r) => SetAnswer::Keys(tree.range_query(*l, *r)),
            })
        })
        .collect()
}
