//! Phase-parallel longest increasing subsequence (LIS) and weighted LIS.
//!
//! The unweighted engine peels one frontier of prefix-minimum objects per
//! round from a parallel tournament tree ([`tournament`], [`lis`]). The
//! weighted engine ([`wlis`]) replays those frontiers against a dominance
//! structure: either a static range tree ([`range_tree`]) or a range tree
//! whose inner trees are monotone staircases ([`staircase`]) stored in a
//! batch-parallel van Emde Boas tree ([`veb`], [`range_veb`]).
//!
//! Sequential baselines and brute-force oracles live in [`baselines`];
//! deterministic input generators and the dataset file format in
//! [`dataset`].

pub mod baselines;
pub mod counters;
pub mod dataset;
mod error;
pub mod lis;
pub mod par;
pub mod range_tree;
pub mod range_veb;
pub mod staircase;
pub mod tournament;
pub mod veb;
pub mod wlis;

pub use error::{Error, Result};

/// A scored answer to a dominant-max query: the best score in the region and
/// the input index that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scored {
    pub score: i64,
    pub origin: usize,
}

impl Scored {
    pub fn new(score: i64, origin: usize) -> Self {
        Scored { score, origin }
    }

    /// Larger score wins; among equal scores the smaller origin index wins.
    pub fn better(self, other: Scored) -> Scored {
        if other.score > self.score || (other.score == self.score && other.origin < self.origin) {
            other
        } else {
            self
        }
    }

    pub fn best_of(a: Option<Scored>, b: Option<Scored>) -> Option<Scored> {
        match (a, b) {
            (Some(a), Some(b)) => Some(a.better(b)),
            (a, None) => a,
            (None, b) => b,
        }
    }
}
