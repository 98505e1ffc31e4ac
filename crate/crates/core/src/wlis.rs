//! Weighted LIS driver.
//!
//! Ranks from [`crate::lis`] fix a legal schedule: every point strictly
//! lower-left of a rank-`r` point has a smaller rank, so after rounds
//! `1..r` its dp is final. Each round queries all its points against the
//! backend, then publishes their dp values in one batch.

use crate::counters::Counters;
use crate::lis::lis_ranks;
use crate::range_tree::RangeTree;
use crate::range_veb::RangeVebTree;
use crate::{par, Error, Result, Scored};

/// A static 2D point set `(x = values[y], y)` answering strict lower-left
/// maximum queries under batched score increases.
pub trait DominanceBackend: Sync {
    fn dominant_max(&self, qx: i64, qy: usize) -> Option<Scored>;

    /// Query at point `y`'s own corner, where `qx` is its x.
    fn dominant_max_point(&self, y: usize, qx: i64) -> Option<Scored> {
        self.dominant_max(qx, y)
    }

    fn update_batch(&mut self, updates: &[(usize, i64)]) -> Result<()>;

    fn veb_visits(&self) -> u64 {
        0
    }
}

impl DominanceBackend for RangeTree {
    fn dominant_max(&self, qx: i64, qy: usize) -> Option<Scored> {
        RangeTree::dominant_max(self, qx, qy)
    }

    fn update_batch(&mut self, updates: &[(usize, i64)]) -> Result<()> {
        RangeTree::update_batch(self, updates)
    }
}

impl DominanceBackend for RangeVebTree {
    fn dominant_max(&self, qx: i64, qy: usize) -> Option<Scored> {
        RangeVebTree::dominant_max(self, qx, qy)
    }

    fn dominant_max_point(&self, y: usize, _qx: i64) -> Option<Scored> {
        RangeVebTree::dominant_max_point(self, y)
    }

    fn update_batch(&mut self, updates: &[(usize, i64)]) -> Result<()> {
        RangeVebTree::update_batch(self, updates)
    }

    fn veb_visits(&self) -> u64 {
        RangeVebTree::veb_visits(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    RangeTree,
    RangeVeb,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WlisResult {
    pub dp: Vec<i64>,
    /// The maximum dp and its smallest attaining index.
    pub best: Scored,
    /// The index whose dp was added to `dp[i]`, if any was positive.
    pub choice: Vec<Option<usize>>,
    pub counters: Counters,
}

pub fn wlis(values: &[i64], weights: &[i64], backend: Backend) -> Result<WlisResult> {
    check(values, weights)?;
    match backend {
        Backend::RangeTree => wlis_with(values, weights, RangeTree::with_values(values)?),
        Backend::RangeVeb => wlis_with(values, weights, RangeVebTree::with_values(values)?),
    }
}

fn check(values: &[i64], weights: &[i64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch { what: "weights", expected: values.len(), got: weights.len() });
    }
    Ok(())
}

/// Runs the driver against an unscored backend built over `values`.
pub fn wlis_with<B: DominanceBackend>(values: &[i64], weights: &[i64], mut backend: B) -> Result<WlisResult> {
    check(values, weights)?;
    let lis = lis_ranks(values)?;
    let n = values.len();
    let mut dp = vec![0i64; n];
    let mut choice = vec![None; n];
    for f in &lis.frontiers {
        let answers = par::map(f, |&j| {
            let hit = backend.dominant_max_point(j, values[j]).filter(|s| s.score > 0);
            let add = hit.map_or(0, |s| s.score);
            let d = weights[j]
                .checked_add(add)
                .ok_or_else(|| Error::Overflow(format!("weighted dp at index {j} exceeds i64")));
            (j, d, hit.map(|s| s.origin))
        });
        let mut updates = Vec::with_capacity(f.len());
        for (j, d, c) in answers {
            let d = d?;
            dp[j] = d;
            choice[j] = c;
            updates.push((j, d));
        }
        backend.update_batch(&updates)?;
    }
    let best =
        dp.iter().enumerate().map(|(i, &d)| Scored::new(d, i)).reduce(Scored::better).ok_or(Error::EmptyInput)?;
    let mut counters = lis.counters;
    counters.veb_visits = backend.veb_visits();
    Ok(WlisResult { dp, best, choice, counters })
}

/// Indices of one maximum-weight increasing subsequence, ascending.
pub fn reconstruct_wlis(res: &WlisResult) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = Some(res.best.origin);
    while let Some(i) = cur {
        out.push(i);
        cur = res.choice[i];
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{brute_wlis, seq_avl};
    use proptest::prelude::*;

    const BOTH: [Backend; 2] = [Backend::RangeTree, Backend::RangeVeb];

    #[test]
    fn examples() {
        for b in BOTH {
            let r = wlis(&[1, 2], &[3, 4], b).unwrap();
            assert_eq!((r.dp.clone(), r.best.score), (vec![3, 7], 7));
            assert_eq!(reconstruct_wlis(&r), vec![0, 1]);
            let r = wlis(&[1, 2], &[-1, 4], b).unwrap();
            assert_eq!((r.dp.clone(), r.best.score), (vec![-1, 4], 4));
            assert_eq!(r.choice, vec![None, None]);
            assert_eq!(reconstruct_wlis(&r), vec![1]);
            assert_eq!(wlis(&[1, 3, 2], &[5, 1, 4], b).unwrap().dp, vec![5, 6, 9]);
            assert_eq!(wlis(&[1, 1], &[2, 3], b).unwrap().dp, vec![2, 3]);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            wlis(&[1, 2], &[1], Backend::RangeTree).unwrap_err(),
            Error::LengthMismatch { what: "weights", expected: 2, got: 1 }
        );
        assert_eq!(wlis(&[], &[], Backend::RangeVeb).unwrap_err(), Error::EmptyInput);
        assert!(matches!(wlis(&[1, 2], &[i64::MAX, 1], Backend::RangeVeb), Err(Error::Overflow(_))));
    }

    #[test]
    fn ties_pick_smallest_index() {
        for b in BOTH {
            let r = wlis(&[1, 1, 2], &[4, 4, 1], b).unwrap();
            assert_eq!(r.choice[2], Some(0));
            assert_eq!(r.best, Scored::new(5, 2));
            let r = wlis(&[3, 1], &[2, 2], b).unwrap();
            assert_eq!(r.best, Scored::new(2, 0));
        }
    }

    fn check_witness(values: &[i64], weights: &[i64], res: &WlisResult) -> std::result::Result<(), TestCaseError> {
        let w = reconstruct_wlis(res);
        prop_assert!(w.windows(2).all(|p| p[0] < p[1] && values[p[0]] < values[p[1]]));
        prop_assert_eq!(w.iter().map(|&i| weights[i]).sum::<i64>(), res.best.score);
        for (i, c) in res.choice.iter().enumerate() {
            let add = c.map_or(0, |c| res.dp[c]);
            prop_assert_eq!(res.dp[i], weights[i] + add);
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn matches_oracles(
            pairs in prop::collection::vec((-20i64..20, -50i64..50), 1..160),
        ) {
            let (values, weights): (Vec<i64>, Vec<i64>) = pairs.into_iter().unzip();
            let want = brute_wlis(&values, &weights).unwrap();
            prop_assert_eq!(&seq_avl(&values, &weights).unwrap(), &want);
            let a = wlis(&values, &weights, Backend::RangeTree).unwrap();
            let b = wlis(&values, &weights, Backend::RangeVeb).unwrap();
            prop_assert_eq!(&a.dp, &want);
            prop_assert_eq!(&a, &WlisResult { counters: a.counters.clone(), ..b.clone() });
            check_witness(&values, &weights, &a)?;
            check_witness(&values, &weights, &b)?;
        }

        #[test]
        fn unit_weights_give_ranks(values in prop::collection::vec(-30i64..30, 1..200)) {
            let ranks = lis_ranks(&values).unwrap().ranks;
            let ones = vec![1; values.len()];
            for b in BOTH {
                let r = wlis(&values, &ones, b).unwrap();
                prop_assert!(r.dp.iter().zip(&ranks).all(|(&d, &r)| d == r as i64));
            }
        }
    }
}
