use super::VebTree;
use crate::par;
use crate::{Error, Result};

/// Survival predecessor and successor of each key of a deletion batch,
/// aligned with the batch: the nearest keys of `tree \ batch` below and
/// above. `None` stands for minus and plus infinity respectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurvivorMaps {
    pub pred: Vec<Option<u64>>,
    pub succ: Vec<Option<u64>>,
}

fn min_succ(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl VebTree {
    pub fn survivor_maps(&self, keys: &[u64]) -> Result<SurvivorMaps> {
        self.check_subset(keys)?;
        Ok(self.survivor_maps_raw(keys))
    }

    fn check_subset(&self, keys: &[u64]) -> Result<()> {
        self.check_batch(keys)?;
        match keys.iter().find(|&&x| !self.member_raw(x)) {
            Some(&x) => Err(Error::KeyAbsent(x)),
            None => Ok(()),
        }
    }

    /// Each key takes its tree neighbour unless that neighbour is itself in
    /// the batch; a prefix-max (suffix-min) sweep then fills those gaps.
    fn survivor_maps_raw(&self, keys: &[u64]) -> SurvivorMaps {
        let m = keys.len();
        let idx: Vec<usize> = (0..m).collect();
        let ends = par::map(&idx, |&j| {
            let x = keys[j];
            let p = self.pred_raw(x, &mut 0).filter(|&p| j == 0 || p != keys[j - 1]);
            let s = self.succ_raw(x, &mut 0).filter(|&s| j + 1 == m || s != keys[j + 1]);
            (p, s)
        });
        let (mut pred, mut succ): (Vec<_>, Vec<_>) = ends.into_iter().unzip();
        for j in 1..m {
            pred[j] = pred[j].max(pred[j - 1]);
        }
        for j in (0..m.saturating_sub(1)).rev() {
            succ[j] = min_succ(succ[j], succ[j + 1]);
        }
        SurvivorMaps { pred, succ }
    }

    /// Deletes a strictly increasing batch of present keys. Returns the
    /// number of tree nodes visited, including the sequential extractions.
    pub fn batch_delete(&mut self, keys: &[u64]) -> Result<u64> {
        self.check_subset(keys)?;
        Ok(self.delete_batch_raw(keys))
    }

    /// Requires a strictly increasing batch of present keys.
    pub(crate) fn delete_batch_raw(&mut self, keys: &[u64]) -> u64 {
        if keys.is_empty() {
            return 0;
        }
        let maps = self.survivor_maps_raw(keys);
        self.delete_rec(keys, maps.pred, maps.succ)
    }

    fn delete_rec(&mut self, b: &[u64], mut p: Vec<Option<u64>>, mut s: Vec<Option<u64>>) -> u64 {
        let m = b.len();
        if m == 0 {
            return 0;
        }
        let mut visits = 1;
        let (vmin, vmax) = (self.min, self.max);
        if vmin == Some(b[0]) {
            let y = s[0];
            if let Some(y) = y.filter(|&y| Some(y) != self.max) {
                self.delete_raw(y, &mut visits);
                self.redirect(b, &mut p, &mut s, y, &mut visits);
            }
            self.min = y;
        }
        if vmax == Some(b[m - 1]) {
            let y = p[m - 1];
            if let Some(y) = y.filter(|&y| Some(y) != self.min) {
                self.delete_raw(y, &mut visits);
                self.redirect(b, &mut p, &mut s, y, &mut visits);
            }
            self.max = y;
        }
        if self.max.is_none() && self.min.is_some() {
            self.max = self.min;
        }
        let lo = usize::from(vmin == Some(b[0]));
        let hi = if vmax == Some(b[m - 1]) { m - 1 } else { m }.max(lo);
        if lo == hi {
            return visits;
        }
        debug_assert!(self.bits > 1);
        let (b, p, s) = (&b[lo..hi], &p[lo..hi], &s[lo..hi]);
        let groups = self.group_by_high(b);
        let (vmin, vmax, lb) = (self.min, self.max, self.low_bits());
        let (high, low) = (|x: u64| x >> lb, |x: u64| x & ((1u64 << lb) - 1));

        visits += Self::for_groups(&mut self.clusters, 0, &groups, &|slot, g| {
            let range = g.start..g.end;
            let lows: Vec<u64> = b[range.clone()].iter().map(|&x| low(x)).collect();
            let ph =
                p[range.clone()].iter().map(|&q| q.filter(|&q| high(q) == g.h && Some(q) != vmin).map(low)).collect();
            let sh = s[range].iter().map(|&q| q.filter(|&q| high(q) == g.h && Some(q) != vmax).map(low)).collect();
            let c = slot.as_mut().expect("batch key in a missing cluster");
            let v = c.delete_rec(&lows, ph, sh);
            if c.is_empty() {
                *slot = None;
            }
            v
        });

        let emptied: Vec<_> = groups.iter().filter(|g| self.clusters[g.h as usize].is_none()).collect();
        if emptied.is_empty() {
            return visits;
        }
        let hs: Vec<u64> = emptied.iter().map(|g| g.h).collect();
        let ph = emptied.iter().map(|g| p[g.start].filter(|&q| Some(q) != vmin).map(high)).collect();
        let sh = emptied.iter().map(|g| s[g.end - 1].filter(|&q| Some(q) != vmax).map(high)).collect();
        let summary = self.summary.as_mut().expect("nonempty clusters imply a summary");
        visits + summary.delete_rec(&hs, ph, sh)
    }

    /// Points every map entry equal to the just-extracted key `y` at `y`'s
    /// own survival neighbours.
    fn redirect(&self, b: &[u64], p: &mut [Option<u64>], s: &mut [Option<u64>], y: u64, visits: &mut u64) {
        let through = |q: Option<u64>, map: &[Option<u64>]| match q {
            Some(k) => b.binary_search(&k).map_or(Some(k), |i| map[i]),
            None => None,
        };
        let np = through(self.pred_raw(y, visits), p);
        let ns = through(self.succ_raw(y, visits), s);
        par::for_each_mut(p, |q| {
            if *q == Some(y) {
                *q = np;
            }
        });
        par::for_each_mut(s, |q| {
            if *q == Some(y) {
                *q = ns;
            }
        });
    }
}
