//! Round-by-round LIS ranks and reconstruction of one witness.

use crate::counters::Counters;
use crate::par;
use crate::tournament::TournamentTree;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LisResult {
    /// `ranks[i]` is the length of the longest strictly increasing
    /// subsequence ending at `i`.
    pub ranks: Vec<u32>,
    /// LIS length, the maximum rank.
    pub k: usize,
    /// `frontiers[r - 1]` lists every index of rank `r`, ascending.
    pub frontiers: Vec<Vec<usize>>,
    pub counters: Counters,
}

/// Computes all ranks by peeling one prefix-min frontier per round.
pub fn lis_ranks(values: &[i64]) -> Result<LisResult> {
    let mut tree = TournamentTree::build(values)?;
    let mut ranks = vec![0u32; values.len()];
    let mut counters = Counters::default();
    let mut round = 0u32;
    while !tree.is_exhausted() {
        round += 1;
        let m = tree.process_frontier(round, &mut ranks);
        counters.record_frontier(m);
    }
    counters.rounds = round as u64;
    counters.tournament_visits = tree.visits();
    let frontiers = frontiers(&ranks);
    Ok(LisResult { ranks, k: round as usize, frontiers, counters })
}

/// Same result as [`lis_ranks`], but every frontier is materialized during
/// its round by the mark/collect/remove passes instead of bucketing ranks
/// afterwards.
pub fn lis_ranks_collecting(values: &[i64]) -> Result<LisResult> {
    let mut tree = TournamentTree::build(values)?;
    let mut ranks = vec![0u32; values.len()];
    let mut counters = Counters::default();
    let mut out = Vec::new();
    while !tree.is_exhausted() {
        let round = out.len() as u32 + 1;
        let f = tree.process_frontier_collect(round, &mut ranks);
        counters.record_frontier(f.len());
        out.push(f);
    }
    counters.rounds = out.len() as u64;
    counters.tournament_visits = tree.visits();
    Ok(LisResult { ranks, k: out.len(), frontiers: out, counters })
}

/// Stable bucketing of indices by rank.
pub fn frontiers(ranks: &[u32]) -> Vec<Vec<usize>> {
    let k = ranks.iter().copied().max().unwrap_or(0) as usize;
    let mut sizes = vec![0usize; k];
    for &r in ranks {
        sizes[r as usize - 1] += 1;
    }
    let mut out: Vec<Vec<usize>> = sizes.into_iter().map(Vec::with_capacity).collect();
    for (i, &r) in ranks.iter().enumerate() {
        out[r as usize - 1].push(i);
    }
    out
}

/// For every index of rank `r > 1`, the last rank-`(r - 1)` index before it.
pub fn predecessors(res: &LisResult) -> Vec<Option<usize>> {
    let mut pred = vec![None; res.ranks.len()];
    for r in 1..res.frontiers.len() {
        let prev = &res.frontiers[r - 1];
        let links = par::map(&res.frontiers[r], |&i| {
            let p = prev.partition_point(|&j| j < i);
            (i, prev[p - 1])
        });
        for (i, j) in links {
            pred[i] = Some(j);
        }
    }
    pred
}

/// One longest increasing subsequence, as ascending indices.
///
/// Each rank-`r` object links to the last rank-`(r - 1)` object before it;
/// frontiers are value-non-increasing by index, so that object is also the
/// smallest eligible value. The walk starts at the first rank-`k` index.
pub fn reconstruct_lis(values: &[i64], res: &LisResult) -> Vec<usize> {
    debug_assert_eq!(values.len(), res.ranks.len());
    let Some(last) = res.frontiers.last() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(res.k);
    let mut cur = last[0];
    out.push(cur);
    for r in (0..res.k - 1).rev() {
        let f = &res.frontiers[r];
        cur = f[f.partition_point(|&j| j < cur) - 1];
        out.push(cur);
    }
    out.reverse();
    out
}
