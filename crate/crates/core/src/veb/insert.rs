use super::VebTree;
use crate::par;
use crate::{Error, Result};

impl VebTree {
    /// Inserts a strictly increasing batch of absent keys. Returns the
    /// number of tree nodes the batch recursion visited.
    pub fn batch_insert(&mut self, keys: &[u64]) -> Result<u64> {
        self.check_batch(keys)?;
        if let Some(&x) = keys.iter().find(|&&x| self.member_raw(x)) {
            return Err(Error::KeyPresent(x));
        }
        Ok(self.insert_batch_raw(keys))
    }

    /// Requires a strictly increasing batch of absent in-universe keys.
    pub(crate) fn insert_batch_raw(&mut self, keys: &[u64]) -> u64 {
        if keys.is_empty() {
            return 0;
        }
        // Displaced min/max rejoin the batch; both ends become the new
        // min/max and everything between goes into clusters.
        let mut all = Vec::with_capacity(keys.len() + 2);
        let olds: &[u64] = match (self.min, self.max) {
            (Some(a), Some(b)) if a != b => &[a, b],
            (Some(a), _) => &[a],
            _ => &[],
        };
        let (mut i, mut j) = (0, 0);
        while i < keys.len() || j < olds.len() {
            if j == olds.len() || (i < keys.len() && keys[i] < olds[j]) {
                all.push(keys[i]);
                i += 1;
            } else {
                all.push(olds[j]);
                j += 1;
            }
        }
        self.min = all.first().copied();
        self.max = all.last().copied();
        if all.len() <= 2 {
            return 1;
        }
        debug_assert!(self.bits > 1);
        let inner = &all[1..all.len() - 1];
        let lows: Vec<u64> = inner.iter().map(|&x| self.low(x)).collect();
        let groups = self.group_by_high(inner);
        self.ensure_clusters();
        let cb = self.low_bits();
        // New clusters are seeded with their smallest low and take the rest
        // as their batch; existing clusters take every low of their group.
        let mut new_highs = Vec::new();
        for g in &groups {
            let slot = &mut self.clusters[g.h as usize];
            if slot.as_ref().is_none_or(|c| c.is_empty()) {
                *slot = Some(Box::new(VebTree::singleton(cb, lows[g.start])));
                new_highs.push(g.h);
            }
        }
        self.summary_mut();
        let summary = self.summary.as_mut().unwrap();
        let clusters = &mut self.clusters;
        let (a, b) = par::join_if(
            inner.len() >= super::PAR_KEYS,
            || summary.insert_batch_raw(&new_highs),
            || {
                Self::for_groups(clusters, 0, &groups, &|slot, g| {
                    let from = if new_highs.binary_search(&g.h).is_ok() { g.start + 1 } else { g.start };
                    slot.as_mut().unwrap().insert_batch_raw(&lows[from..g.end])
                })
            },
        );
        1 + a + b
    }
}
