//! Monotone staircase kept in a vEB tree keyed on (relabeled) y.
//!
//! Only points that no other point covers are stored, so keys and scores
//! increase together and the best score strictly below a key is simply the
//! score of its predecessor.

use crate::par;
use crate::veb::VebTree;
use crate::{Error, Result, Scored};

/// A scored point as seen by one staircase: `y` is the key in the local
/// universe, `origin` the input index it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub y: u64,
    pub dp: i64,
    pub origin: usize,
}

impl Point {
    pub fn new(y: u64, dp: i64, origin: usize) -> Self {
        Point { y, dp, origin }
    }
}

/// `p1` covers `p2` when it lies strictly below with at least the score.
pub fn covers(p1: &Point, p2: &Point) -> bool {
    p1.y < p2.y && p1.dp >= p2.dp
}

/// How a boundary search went: successor steps taken in the linear chase
/// and whether it fell through to binary search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FindStats {
    pub chase_steps: u64,
    pub binary_search: bool,
}

#[derive(Clone, Debug)]
pub struct Staircase {
    keys: VebTree,
    score: Vec<i64>,
    origin: Vec<usize>,
    len: usize,
    veb_visits: u64,
}

impl Staircase {
    /// Empty staircase over keys `[0, n_star)`; the tree universe is
    /// `n_star` rounded up to a power of two.
    pub fn new(n_star: usize) -> Result<Self> {
        if n_star == 0 {
            return Err(Error::InvalidParameter("staircase universe must be nonempty".into()));
        }
        let bits = n_star.next_power_of_two().trailing_zeros().max(1);
        Ok(Staircase {
            keys: VebTree::new(bits)?,
            score: vec![i64::MIN; n_star],
            origin: vec![usize::MAX; n_star],
            len: 0,
            veb_visits: 0,
        })
    }

    pub fn n_star(&self) -> usize {
        self.score.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn universe_bits(&self) -> u32 {
        self.keys.bits()
    }

    /// vEB nodes visited by all batch operations so far.
    pub fn veb_visits(&self) -> u64 {
        self.veb_visits
    }

    pub fn score_of(&self, key: u64) -> Option<i64> {
        self.keys.member_raw(key).then(|| self.score[key as usize])
    }

    /// `(key, score, origin)` in key order.
    pub fn entries(&self) -> Vec<(u64, i64, usize)> {
        self.keys.keys().into_iter().map(|k| (k, self.score[k as usize], self.origin[k as usize])).collect()
    }

    /// Best stored score strictly below `q` with the index that owns it.
    pub fn prefix_best(&self, q: u64) -> Option<Scored> {
        let k = if q >= self.n_star() as u64 { self.keys.max() } else { self.keys.pred_raw(q, &mut 0) }?;
        Some(Scored::new(self.score[k as usize], self.origin[k as usize]))
    }

    fn check_batch(&self, batch: &[Point]) -> Result<()> {
        let n = self.n_star() as u64;
        for (i, p) in batch.iter().enumerate() {
            if p.y >= n {
                return Err(Error::OutOfUniverse { key: p.y, universe: n });
            }
            if i > 0 && batch[i - 1].y >= p.y {
                return Err(Error::UnsortedBatch(i));
            }
        }
        Ok(())
    }

    /// Drops every batch point covered by an earlier batch point or by its
    /// predecessor on the staircase.
    pub fn refine(&self, batch: &[Point]) -> Result<Vec<Point>> {
        self.check_batch(batch)?;
        Ok(self.refine_raw(batch))
    }

    // The kept points form a chain of strictly rising scores, so "covered by
    // the last kept point" is the same as "not above every earlier batch
    // score": a point dropped against the staircase can only shadow later
    // points that the staircase covers too.
    fn refine_raw(&self, batch: &[Point]) -> Vec<Point> {
        let above_stair =
            par::map(batch, |p| self.keys.pred_raw(p.y, &mut 0).is_none_or(|q| self.score[q as usize] < p.dp));
        let mut best = i64::MIN;
        let mut out = Vec::new();
        for (i, p) in batch.iter().enumerate() {
            if (i == 0 || p.dp > best) && above_stair[i] {
                out.push(*p);
            }
            best = best.max(p.dp);
        }
        out
    }

    /// Keys on the staircase covered by some point of a refined batch,
    /// ascending. Between consecutive batch keys, the covered keys are a
    /// prefix of the run, found by [`find_index`](Self::find_index).
    pub fn covered_by(&self, batch: &[Point]) -> Vec<u64> {
        let idx: Vec<usize> = (0..batch.len()).collect();
        let parts = par::map(&idx, |&i| {
            let b = &batch[i];
            let Some(s) = self.keys.succ_raw(b.y, &mut 0) else { return Vec::new() };
            // A present key equal to the next batch key still belongs to
            // this run; the batch re-scores it but `b` may cover it too.
            let e = match batch.get(i + 1) {
                Some(next) if self.keys.member_raw(next.y) => Some(next.y),
                Some(next) => self.keys.pred_raw(next.y, &mut 0),
                None => self.keys.max(),
            };
            match e {
                Some(e) if s <= e => match self.find_index(b.dp, s, e).0 {
                    Some(end) => self.keys.range_query(s, end),
                    None => Vec::new(),
                },
                _ => Vec::new(),
            }
        });
        parts.concat()
    }

    /// Last key in `[s, e]` whose score is at most `dp`, for keys `s <= e`
    /// of the staircase. Chases successors for `log2 U` steps, then
    /// switches to binary search over the key range.
    pub fn find_index(&self, dp: i64, s: u64, e: u64) -> (Option<u64>, FindStats) {
        let mut stats = FindStats::default();
        if self.score[s as usize] > dp {
            return (None, stats);
        }
        if s == e {
            return (Some(s), stats);
        }
        let mut cur = s;
        for _ in 0..self.keys.bits() {
            let next = self.keys.succ_raw(cur, &mut 0).expect("e lies above cur");
            stats.chase_steps += 1;
            if self.score[next as usize] > dp {
                return (Some(cur), stats);
            }
            if next == e {
                return (Some(e), stats);
            }
            cur = next;
        }
        stats.binary_search = true;
        (Some(self.binary_search(dp, cur, e)), stats)
    }

    // Keeps score[s] <= dp. The probe is the largest key at or below the
    // midpoint, bumped to succ(s) when that is s itself, so each step
    // shrinks [s, e] even when s and e are adjacent keys.
    fn binary_search(&self, dp: i64, mut s: u64, mut e: u64) -> u64 {
        while s != e {
            let c = s + (e - s).div_ceil(2);
            let mut mid = if self.keys.member_raw(c) { c } else { self.keys.pred_raw(c, &mut 0).unwrap() };
            if mid == s {
                mid = self.keys.succ_raw(s, &mut 0).unwrap();
            }
            if self.score[mid as usize] <= dp {
                s = mid;
            } else {
                e = self.keys.pred_raw(mid, &mut 0).unwrap();
            }
        }
        s
    }

    /// Offers a y-sorted batch: refines it, deletes the staircase keys it
    /// covers (and any key it re-scores), then inserts the survivors.
    /// Returns the vEB node visits spent.
    pub fn apply_update(&mut self, batch: &[Point]) -> Result<u64> {
        self.check_batch(batch)?;
        for p in batch {
            if let Some(old) = self.score_of(p.y) {
                if old > p.dp {
                    return Err(Error::ScoreDecrease { key: p.y, old, new: p.dp });
                }
            }
        }
        Ok(self.apply_update_raw(batch))
    }

    pub(crate) fn apply_update_raw(&mut self, batch: &[Point]) -> u64 {
        let refined = self.refine_raw(batch);
        if refined.is_empty() {
            return 0;
        }
        let covered = self.covered_by(&refined);
        let rescored: Vec<u64> = refined.iter().map(|p| p.y).filter(|&y| self.keys.member_raw(y)).collect();
        let mut dels = Vec::with_capacity(covered.len() + rescored.len());
        let (mut i, mut j) = (0, 0);
        while i < covered.len() || j < rescored.len() {
            let x = if j == rescored.len() || (i < covered.len() && covered[i] < rescored[j]) {
                i += 1;
                covered[i - 1]
            } else {
                j += 1;
                rescored[j - 1]
            };
            if dels.last() != Some(&x) {
                dels.push(x);
            }
        }
        let mut visits = self.keys.delete_batch_raw(&dels);
        for &d in &dels {
            self.score[d as usize] = i64::MIN;
            self.origin[d as usize] = usize::MAX;
        }
        let ins: Vec<u64> = refined.iter().map(|p| p.y).collect();
        visits += self.keys.insert_batch_raw(&ins);
        for p in &refined {
            self.score[p.y as usize] = p.dp;
            self.origin[p.y as usize] = p.origin;
        }
        self.len = self.len - dels.len() + refined.len();
        self.veb_visits += visits;
        visits
    }

    /// Checks the tree invariants and strict key/score monotonicity.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.keys.audit()?;
        let e = self.entries();
        if e.len() != self.len {
            return Err(format!("length {} but {} keys", self.len, e.len()));
        }
        if let Some(w) = e.windows(2).find(|w| w[0].1 >= w[1].1) {
            return Err(format!("scores not increasing at keys {} and {}", w[0].0, w[1].0));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn pt(y: u64, dp: i64) -> Point {
        Point::new(y, dp, y as usize + 100)
    }

    fn stair(n: usize, pts: &[(u64, i64)]) -> Staircase {
        let mut st = Staircase::new(n).unwrap();
        let batch: Vec<Point> = pts.iter().map(|&(y, d)| pt(y, d)).collect();
        st.apply_update(&batch).unwrap();
        st
    }

    /// Staircase of a set of (y, dp): points whose dp beats every smaller y.
    fn brute_stair(points: &BTreeMap<u64, i64>) -> Vec<(u64, i64)> {
        let mut best = i64::MIN;
        let mut out = Vec::new();
        for (&y, &d) in points {
            if out.is_empty() || d > best {
                out.push((y, d));
            }
            best = best.max(d);
        }
        out
    }

    fn linear_find(st: &Staircase, dp: i64, s: u64, e: u64) -> Option<u64> {
        st.entries()
            .into_iter()
            .filter(|&(k, sc, _)| s <= k && k <= e && sc <= dp)
            .map(|t| t.0)
            .max()
            .filter(|_| st.score[s as usize] <= dp)
    }

    #[test]
    fn covers_examples() {
        assert!(covers(&pt(1, 5), &pt(2, 5)));
        assert!(!covers(&pt(2, 9), &pt(1, 1)));
        assert!(!covers(&pt(1, 3), &pt(2, 7)));
    }

    #[test]
    fn refine_examples() {
        let st = Staircase::new(8).unwrap();
        assert_eq!(st.refine(&[pt(1, 5), pt(2, 4)]).unwrap(), vec![pt(1, 5)]);
        let st = stair(8, &[(0, 9)]);
        assert!(st.refine(&[pt(3, 9)]).unwrap().is_empty());
        assert_eq!(st.refine(&[pt(2, 1), pt(1, 3)]).unwrap_err(), Error::UnsortedBatch(1));
    }

    #[test]
    fn covered_by_examples() {
        let st = stair(8, &[(2, 1), (4, 2), (6, 3)]);
        assert!(st.covered_by(&[pt(1, 0)]).is_empty());
        assert_eq!(st.covered_by(&[pt(1, 2)]), vec![2, 4]);
        assert!(st.covered_by(&[pt(7, 100)]).is_empty());
    }

    #[test]
    fn apply_update_examples() {
        let st = stair(4, &[(1, 5)]);
        assert_eq!(st.entries(), vec![(1, 5, 101)]);
        let mut st = stair(4, &[(2, 3)]);
        st.apply_update(&[pt(1, 3)]).unwrap();
        assert_eq!(st.entries(), vec![(1, 3, 101)]);
        st.audit().unwrap();
        assert_eq!(st.apply_update(&[pt(1, 2)]).unwrap_err(), Error::ScoreDecrease { key: 1, old: 3, new: 2 });
        assert!(st.apply_update(&[pt(9, 2)]).is_err());
    }

    #[test]
    fn rescoring_a_present_key_replaces_it() {
        let mut st = stair(8, &[(1, 1), (3, 4), (5, 6)]);
        st.apply_update(&[pt(3, 5)]).unwrap();
        assert_eq!(st.entries().iter().map(|e| (e.0, e.1)).collect::<Vec<_>>(), vec![(1, 1), (3, 5), (5, 6)]);
        st.apply_update(&[pt(3, 8)]).unwrap();
        assert_eq!(st.entries().iter().map(|e| (e.0, e.1)).collect::<Vec<_>>(), vec![(1, 1), (3, 8)]);
        st.audit().unwrap();
    }

    #[test]
    fn prefix_best_examples() {
        assert_eq!(Staircase::new(8).unwrap().prefix_best(5), None);
        let st = stair(8, &[(1, 5), (4, 9)]);
        assert_eq!(st.prefix_best(4), Some(Scored::new(5, 101)));
        assert_eq!(st.prefix_best(1), None);
        assert_eq!(st.prefix_best(8), Some(Scored::new(9, 104)));
    }

    #[test]
    fn negative_scores() {
        let st = stair(8, &[(0, -9), (3, -4), (5, -4), (6, 0)]);
        assert_eq!(st.entries().iter().map(|e| (e.0, e.1)).collect::<Vec<_>>(), vec![(0, -9), (3, -4), (6, 0)]);
    }

    #[test]
    fn find_index_switches_after_exactly_log_u_steps() {
        // 64 keys with scores 0..63 in a 64-key universe: log2 U = 6.
        let n = 64;
        let pts: Vec<(u64, i64)> = (0..n as u64).map(|y| (y, y as i64)).collect();
        let st = stair(n, &pts);
        assert_eq!(st.universe_bits(), 6);
        let (r, stats) = st.find_index(3, 0, 63);
        assert_eq!(r, Some(3));
        assert_eq!(stats, FindStats { chase_steps: 4, binary_search: false });
        let (r, stats) = st.find_index(5, 0, 63);
        assert_eq!(r, Some(5));
        assert_eq!(stats, FindStats { chase_steps: 6, binary_search: false });
        let (r, stats) = st.find_index(6, 0, 63);
        assert_eq!(r, Some(6));
        assert_eq!(stats, FindStats { chase_steps: 6, binary_search: true });
        let (r, stats) = st.find_index(40, 0, 63);
        assert_eq!(r, Some(40));
        assert_eq!(stats, FindStats { chase_steps: 6, binary_search: true });
        assert_eq!(st.find_index(40, 0, 5).0, Some(5));
        assert_eq!(st.find_index(-1, 0, 63).0, None);
    }

    #[test]
    fn binary_search_handles_adjacent_keys() {
        let pts: Vec<(u64, i64)> = (0..40u64).map(|y| (y, y as i64)).collect();
        let st = stair(64, &pts);
        for dp in 0..45 {
            for s in 0..40u64 {
                for e in s..40u64 {
                    assert_eq!(st.find_index(dp, s, e).0, linear_find(&st, dp, s, e), "dp={dp} s={s} e={e}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn stream_matches_recomputed_staircase(
            rounds in prop::collection::vec(prop::collection::vec((0u64..60, -20i64..40), 0..20), 1..30),
        ) {
            let mut st = Staircase::new(60).unwrap();
            let mut latest: BTreeMap<u64, i64> = BTreeMap::new();
            for round in rounds {
                // One offer per key, never lowering a key's score.
                let mut batch: BTreeMap<u64, i64> = BTreeMap::new();
                for (y, d) in round {
                    let d = d.max(latest.get(&y).copied().unwrap_or(i64::MIN));
                    batch.insert(y, d);
                }
                let pts: Vec<Point> = batch.iter().map(|(&y, &d)| pt(y, d)).collect();
                st.apply_update(&pts).unwrap();
                latest.extend(batch);
                st.audit().unwrap();
                let got: Vec<(u64, i64)> = st.entries().iter().map(|e| (e.0, e.1)).collect();
                prop_assert_eq!(got, brute_stair(&latest));
            }
        }

        #[test]
        fn refine_and_covered_by_match_brute_force(
            stair_pts in prop::collection::vec((0u64..64, -10i64..30), 0..64),
            batch_pts in prop::collection::vec((0u64..64, -10i64..30), 1..64),
        ) {
            let base: BTreeMap<u64, i64> = stair_pts.into_iter().collect();
            let st = stair(64, &brute_stair(&base));
            let batch: BTreeMap<u64, i64> = batch_pts.into_iter().collect();
            let batch: Vec<Point> = batch.iter().map(|(&y, &d)| pt(y, d)).collect();
            let refined = st.refine(&batch).unwrap();
            let entries = st.entries();
            let mut kept: Vec<Point> = Vec::new();
            for p in &batch {
                let by_batch = kept.last().is_some_and(|k| covers(k, p));
                let by_stair = entries.iter().any(|&(k, s, _)| covers(&pt(k, s), p));
                if !by_batch && !by_stair {
                    kept.push(*p);
                }
            }
            prop_assert_eq!(&refined, &kept);
            let want: Vec<u64> = entries
                .iter()
                .filter(|&&(k, s, _)| refined.iter().any(|b| covers(b, &pt(k, s))))
                .map(|e| e.0)
                .collect();
            prop_assert_eq!(st.covered_by(&refined), want);
        }

        #[test]
        fn prefix_best_matches_scan(
            pts in prop::collection::vec((0u64..50, -10i64..30), 0..50),
            q in 0u64..60,
        ) {
            let base: BTreeMap<u64, i64> = pts.into_iter().collect();
            let st = stair(50, &brute_stair(&base));
            let want = st.entries().into_iter().filter(|e| e.0 < q).map(|e| Scored::new(e.1, e.2)).max_by_key(|s| s.score);
            prop_assert_eq!(st.prefix_best(q), want);
        }
    }
}
