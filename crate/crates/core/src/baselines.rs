//! Sequential baselines and brute-force oracles.
//!
//! Indices are 0-based throughout.

use std::collections::BTreeSet;
use std::ops::Bound::{Excluded, Unbounded};

use crate::{Error, Result};

/// Default size cap for the quadratic oracles.
pub const ORACLE_CAP: usize = 4096;

/// Ranks via the monotone-array binary search: `tails[r]` is the smallest
/// value ending an increasing subsequence of length `r + 1`.
pub fn seq_bs(values: &[i64]) -> (Vec<u32>, usize) {
    let mut tails: Vec<i64> = Vec::new();
    let mut ranks = Vec::with_capacity(values.len());
    for &v in values {
        let r = tails.partition_point(|&t| t < v);
        if r == tails.len() {
            tails.push(v);
        } else {
            tails[r] = v;
        }
        ranks.push(r as u32 + 1);
    }
    (ranks, tails.len())
}

/// Weighted dp by a left-to-right sweep over a value-ordered prefix-max
/// index (a Fenwick tree over value ranks).
pub fn seq_avl(values: &[i64], weights: &[i64]) -> Result<Vec<i64>> {
    check_lengths(values, weights)?;
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let m = sorted.len();
    let mut fen = vec![i64::MIN; m + 1];
    let mut dp = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        // Ranks strictly below v occupy positions [1, r].
        let r = sorted.partition_point(|&s| s < v);
        let mut best = i64::MIN;
        let mut i = r;
        while i > 0 {
            best = best.max(fen[i]);
            i &= i - 1;
        }
        let d = w.checked_add(best.max(0)).ok_or_else(|| Error::Overflow("weighted dp exceeds i64".into()))?;
        dp.push(d);
        let mut i = r + 1;
        while i <= m {
            fen[i] = fen[i].max(d);
            i += i & i.wrapping_neg();
        }
    }
    Ok(dp)
}

pub fn brute_lis(values: &[i64]) -> Result<Vec<u32>> {
    brute_lis_capped(values, ORACLE_CAP)
}

pub fn brute_lis_capped(values: &[i64], cap: usize) -> Result<Vec<u32>> {
    let n = values.len();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let mut dp = vec![1u32; n];
    for i in 0..n {
        for j in 0..i {
            if values[j] < values[i] {
                dp[i] = dp[i].max(dp[j] + 1);
            }
        }
    }
    Ok(dp)
}

pub fn brute_wlis(values: &[i64], weights: &[i64]) -> Result<Vec<i64>> {
    brute_wlis_capped(values, weights, ORACLE_CAP)
}

pub fn brute_wlis_capped(values: &[i64], weights: &[i64], cap: usize) -> Result<Vec<i64>> {
    check_lengths(values, weights)?;
    let n = values.len();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let mut dp = vec![0i64; n];
    for i in 0..n {
        let mut best = 0i64;
        for j in 0..i {
            if values[j] < values[i] {
                best = best.max(dp[j]);
            }
        }
        dp[i] = weights[i].checked_add(best).ok_or_else(|| Error::Overflow("weighted dp exceeds i64".into()))?;
    }
    Ok(dp)
}

fn check_lengths(values: &[i64], weights: &[i64]) -> Result<()> {
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch { what: "weights", expected: values.len(), got: weights.len() });
    }
    Ok(())
}

/// One step of an ordered-set script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetOp {
    Insert(u64),
    Delete(u64),
    /// Sorted, duplicate-free keys, all absent.
    BatchInsert(Vec<u64>),
    /// Sorted, duplicate-free keys, all present.
    BatchDelete(Vec<u64>),
    Member(u64),
    Min,
    Max,
    Pred(u64),
    Succ(u64),
    Range(u64, u64),
}

/// Answer produced by a query step; mutations produce `Done`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetAnswer {
    Done,
    Bool(bool),
    Key(Option<u64>),
    Keys(Vec<u64>),
}

/// Replays a script against a `BTreeSet`.
pub fn oracle_sorted_set(script: &[SetOp]) -> Vec<SetAnswer> {
    let mut set = BTreeSet::new();
    script.iter().map(|op| oracle_step(&mut set, op)).collect()
}

pub fn oracle_step(set: &mut BTreeSet<u64>, op: &SetOp) -> SetAnswer {
    match op {
        SetOp::Insert(x) => {
            set.insert(*x);
            SetAnswer::Done
        }
        SetOp::Delete(x) => {
            set.remove(x);
            SetAnswer::Done
        }
        SetOp::BatchInsert(b) => {
            set.extend(b.iter().copied());
            SetAnswer::Done
        }
        SetOp::BatchDelete(b) => {
            for x in b {
                set.remove(x);
            }
            SetAnswer::Done
        }
        SetOp::Member(x) => SetAnswer::Bool(set.contains(x)),
        SetOp::Min => SetAnswer::Key(set.first().copied()),
        SetOp::Max => SetAnswer::Key(set.last().copied()),
        SetOp::Pred(x) => SetAnswer::Key(set.range(..*x).next_back().copied()),
        SetOp::Succ(x) => SetAnswer::Key(set.range((Excluded(*x), Unbounded)).next().copied()),
        SetOp::Range(l, r) => {
            if l > r {
                SetAnswer::Keys(Vec::new())
            } else {
                SetAnswer::Keys(set.range(*l..=*r).copied().collect())
            }
        }
    }
}
