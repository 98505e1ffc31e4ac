//! Work counters exported to the benchmark harness.

use std::collections::BTreeMap;

/// Node-visit and round accounting for one algorithm run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub rounds: u64,
    pub tournament_visits: u64,
    pub veb_visits: u64,
    /// `frontier_histogram[b]` counts rounds whose frontier size `m` has
    /// `floor(log2 m) == b`.
    pub frontier_histogram: Vec<u64>,
}

impl Counters {
    pub fn record_frontier(&mut self, size: usize) {
        if size == 0 {
            return;
        }
        let bucket = (usize::BITS - 1 - size.leading_zeros()) as usize;
        if self.frontier_histogram.len() <= bucket {
            self.frontier_histogram.resize(bucket + 1, 0);
        }
        self.frontier_histogram[bucket] += 1;
    }

    /// Flat name -> value table, histogram buckets as `frontier_2^b`.
    pub fn table(&self) -> BTreeMap<String, u64> {
        let mut t = BTreeMap::new();
        t.insert("rounds".to_string(), self.rounds);
        t.insert("tournament_visits".to_string(), self.tournament_visits);
        t.insert("veb_visits".to_string(), self.veb_visits);
        for (b, &c) in self.frontier_histogram.iter().enumerate() {
            if c > 0 {
                t.insert(format!("frontier_2^{b}"), c);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_buckets_by_log2() {
        let mut c = Counters::default();
        for m in [1, 2, 3, 4, 7, 8, 1000] {
            c.record_frontier(m);
        }
        assert_eq!(c.frontier_histogram, vec![1, 2, 2, 1, 0, 0, 0, 0, 0, 1]);
        let t = c.table();
        assert_eq!(t["frontier_2^1"], 2);
        assert!(!t.contains_key("frontier_2^4"));
    }
}
