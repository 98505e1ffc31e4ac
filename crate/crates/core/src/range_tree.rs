//! Static 2D range tree for dominant-max queries with mutable scores.
//!
//! Points are laid out by x-rank in a perfect segment tree over `np`
//! (a power of two) positions. Level `d` splits the positions into blocks
//! of `np >> d`; each block stores its points sorted by y together with a
//! max segment tree over their scores. A query covers the x-prefix with at
//! most one block per level and answers a y-prefix max inside each block.

use crate::par;
use crate::{Error, Result, Scored};

const PAD: u32 = u32::MAX;
const UNSCORED: i64 = i64::MIN;

#[derive(Clone, Debug)]
struct Level {
    /// Point ids, sorted by id within each block; `PAD` fills the tail.
    ys: Vec<u32>,
    /// `pos[y]` is the slot of point `y` in `ys`.
    pos: Vec<u32>,
    /// Block `k` of size `b` owns `[2bk, 2bk + 2b)`: a 1-based max tree
    /// with leaves at offset `b`.
    score: Vec<i64>,
    arg: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct RangeTree {
    n: usize,
    np: usize,
    /// x coordinates in (x, y) order.
    xs: Vec<i64>,
    levels: Vec<Level>,
}

#[inline]
fn pick(s1: i64, a1: u32, s2: i64, a2: u32) -> (i64, u32) {
    if s2 > s1 || (s2 == s1 && a2 < a1) {
        (s2, a2)
    } else {
        (s1, a1)
    }
}

impl RangeTree {
    /// Points `(x, y)` with `y` the index `0..n` and no score yet.
    pub fn with_values(values: &[i64]) -> Result<Self> {
        let pts: Vec<(i64, usize, i64)> = values.iter().enumerate().map(|(y, &x)| (x, y, UNSCORED)).collect();
        Self::build_raw(&pts)
    }

    /// Points `(x, y, dp)`; the `y` values must be exactly `0..n` in some
    /// order, and scores must exceed `i64::MIN`.
    pub fn build(points: &[(i64, usize, i64)]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.2 == UNSCORED) {
            return Err(Error::InvalidParameter(format!("score of point {} is reserved", p.1)));
        }
        Self::build_raw(points)
    }

    fn build_raw(points: &[(i64, usize, i64)]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if n >= PAD as usize {
            return Err(Error::InvalidParameter(format!("{n} points exceed the id range")));
        }
        let mut seen = vec![false; n];
        let mut scores = vec![UNSCORED; n];
        for &(_, y, dp) in points {
            if y >= n {
                return Err(Error::UnknownPoint(y));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::DuplicateCoordinate(y));
            }
            scores[y] = dp;
        }
        let mut order: Vec<(i64, usize)> = points.iter().map(|&(x, y, _)| (x, y)).collect();
        order.sort_unstable();
        let np = n.next_power_of_two();
        let depth = np.trailing_zeros() as usize;
        let xs: Vec<i64> = order.iter().map(|p| p.0).collect();

        let mut ys_by_level: Vec<Vec<u32>> = vec![Vec::new(); depth + 1];
        let mut leaf = vec![PAD; np];
        for (i, &(_, y)) in order.iter().enumerate() {
            leaf[i] = y as u32;
        }
        ys_by_level[depth] = leaf;
        for d in (0..depth).rev() {
            let b = np >> d;
            let child = &ys_by_level[d + 1];
            let mut cur = vec![PAD; np];
            par::for_each_chunk_mut(&mut cur, b, |k, out| {
                let (l, r) = child[k * b..(k + 1) * b].split_at(b / 2);
                let (mut i, mut j) = (0, 0);
                for slot in out.iter_mut() {
                    *slot = if j == r.len() || (i < l.len() && l[i] < r[j]) {
                        i += 1;
                        l[i - 1]
                    } else {
                        j += 1;
                        r[j - 1]
                    };
                }
            });
            ys_by_level[d] = cur;
        }
        let levels = par::map(&(0..=depth).collect::<Vec<_>>(), |&d| {
            let ys = &ys_by_level[d];
            let b = np >> d;
            let mut pos = vec![0u32; n];
            for (i, &y) in ys.iter().enumerate() {
                if y != PAD {
                    pos[y as usize] = i as u32;
                }
            }
            let mut score = vec![UNSCORED; 2 * np];
            let mut arg = vec![PAD; 2 * np];
            for k in 0..np / b {
                let base = 2 * b * k;
                for j in 0..b {
                    let y = ys[k * b + j];
                    if y != PAD {
                        score[base + b + j] = scores[y as usize];
                        arg[base + b + j] = y;
                    }
                }
                for i in (1..b).rev() {
                    let (l, r) = (base + 2 * i, base + 2 * i + 1);
                    (score[base + i], arg[base + i]) = pick(score[l], arg[l], score[r], arg[r]);
                }
            }
            Level { ys: ys.clone(), pos, score, arg }
        });
        Ok(RangeTree { n, np, xs, levels })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Current score of point `y`, if it has one.
    pub fn score(&self, y: usize) -> Option<i64> {
        let leaf = self.levels.last()?;
        let p = *leaf.pos.get(y)? as usize;
        let s = leaf.score[2 * p + 1];
        (s != UNSCORED).then_some(s)
    }

    /// Best score among points with `x < qx` and `y < qy`, ties to the
    /// smallest `y`.
    pub fn dominant_max(&self, qx: i64, qy: usize) -> Option<Scored> {
        let cnt = self.xs.partition_point(|&x| x < qx);
        let qy = qy.min(PAD as usize) as u32;
        let (mut best_s, mut best_a) = (UNSCORED, PAD);
        let mut start = 0usize;
        for (d, level) in self.levels.iter().enumerate() {
            let b = self.np >> d;
            if cnt - start < b {
                continue;
            }
            let k = start / b;
            start += b;
            let t = level.ys[k * b..(k + 1) * b].partition_point(|&y| y < qy);
            let base = 2 * b * k;
            let (mut l, mut r) = (b, b + t);
            while l < r {
                if l & 1 == 1 {
                    (best_s, best_a) = pick(best_s, best_a, level.score[base + l], level.arg[base + l]);
                    l += 1;
                }
                if r & 1 == 1 {
                    r -= 1;
                    (best_s, best_a) = pick(best_s, best_a, level.score[base + r], level.arg[base + r]);
                }
                l >>= 1;
                r >>= 1;
            }
        }
        (best_s != UNSCORED).then(|| Scored::new(best_s, best_a as usize))
    }

    /// Sets the scores of the listed points. Every level is refreshed
    /// independently: all leaves first, then their ancestors bottom-up.
    pub fn update_batch(&mut self, updates: &[(usize, i64)]) -> Result<()> {
        if let Some(&(y, _)) = updates.iter().find(|u| u.0 >= self.n) {
            return Err(Error::UnknownPoint(y));
        }
        if let Some(&(y, _)) = updates.iter().find(|u| u.1 == UNSCORED) {
            return Err(Error::InvalidParameter(format!("score of point {y} is reserved")));
        }
        let np = self.np;
        par::for_each_indexed_mut(&mut self.levels, |d, level| {
            let b = np >> d;
            let slot = |y: usize| {
                let p = level.pos[y] as usize;
                2 * b * (p / b) + b + p % b
            };
            let leaves: Vec<usize> = updates.iter().map(|&(y, _)| slot(y)).collect();
            for (&i, &(_, s)) in leaves.iter().zip(updates) {
                level.score[i] = s;
            }
            for &i in &leaves {
                let base = i - i % (2 * b);
                let mut v = (i - base) / 2;
                while v >= 1 {
                    let (l, r) = (base + 2 * v, base + 2 * v + 1);
                    (level.score[base + v], level.arg[base + v]) =
                        pick(level.score[l], level.arg[l], level.score[r], level.arg[r]);
                    v /= 2;
                }
            }
        });
        Ok(())
    }

    /// Checks every block aggregate against its leaves.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let leaf = self.levels.last().ok_or("no levels")?;
        for (d, level) in self.levels.iter().enumerate() {
            let b = self.np >> d;
            for (i, &y) in level.ys.iter().enumerate() {
                let k = i / b;
                let want = if y == PAD { UNSCORED } else { leaf.score[2 * leaf.pos[y as usize] as usize + 1] };
                if level.score[2 * b * k + b + i % b] != want {
                    return Err(format!("level {d} leaf {i} holds a stale score"));
                }
            }
            for k in 0..self.np / b {
                let base = 2 * b * k;
                for v in 1..b {
                    let (l, r) = (base + 2 * v, base + 2 * v + 1);
                    let want = pick(level.score[l], level.arg[l], level.score[r], level.arg[r]);
                    if (level.score[base + v], level.arg[base + v]) != want {
                        return Err(format!("level {d} block {k} node {v} is stale"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(points: &[(i64, i64)], scores: &[Option<i64>], qx: i64, qy: usize) -> Option<Scored> {
        let mut best: Option<Scored> = None;
        for (y, &(x, _)) in points.iter().enumerate() {
            if x < qx && y < qy {
                if let Some(s) = scores[y] {
                    best = Scored::best_of(best, Some(Scored::new(s, y)));
                }
            }
        }
        best
    }

    #[test]
    fn single_point() {
        let rt = RangeTree::build(&[(5, 0, 3)]).unwrap();
        assert_eq!(rt.dominant_max(5, 0), None);
        assert_eq!(rt.dominant_max(6, 1), Some(Scored::new(3, 0)));
    }

    #[test]
    fn strict_boundaries() {
        let rt = RangeTree::build(&[(2, 0, 7)]).unwrap();
        assert_eq!(rt.dominant_max(2, 5), None);
        let rt = RangeTree::build(&[(2, 0, 7), (3, 1, 9)]).unwrap();
        assert_eq!(rt.dominant_max(4, 3), Some(Scored::new(9, 1)));
        assert_eq!(rt.dominant_max(i64::MAX, usize::MAX), Some(Scored::new(9, 1)));
    }

    #[test]
    fn build_errors() {
        assert_eq!(RangeTree::build(&[(1, 0, 1), (2, 0, 1)]).unwrap_err(), Error::DuplicateCoordinate(0));
        assert_eq!(RangeTree::build(&[(1, 3, 1)]).unwrap_err(), Error::UnknownPoint(3));
        assert_eq!(RangeTree::build(&[]).unwrap_err(), Error::EmptyInput);
        let mut rt = RangeTree::with_values(&[1, 2]).unwrap();
        assert_eq!(rt.update_batch(&[(2, 1)]).unwrap_err(), Error::UnknownPoint(2));
    }

    #[test]
    fn update_examples() {
        let mut rt = RangeTree::with_values(&[4]).unwrap();
        assert_eq!(rt.dominant_max(5, 1), None);
        rt.update_batch(&[(0, 5)]).unwrap();
        assert_eq!(rt.dominant_max(5, 1), Some(Scored::new(5, 0)));
        assert_eq!(rt.score(0), Some(5));
        rt.update_batch(&[]).unwrap();
        rt.audit().unwrap();
    }

    #[test]
    fn ties_go_to_smallest_origin() {
        let rt = RangeTree::build(&[(3, 0, 5), (1, 1, 5), (2, 2, 5)]).unwrap();
        assert_eq!(rt.dominant_max(10, 10), Some(Scored::new(5, 0)));
        assert_eq!(rt.dominant_max(3, 10), Some(Scored::new(5, 1)));
    }

    proptest! {
        #[test]
        fn queries_match_brute_force(
            pts in prop::collection::vec((-8i64..8, -20i64..20), 1..150),
            rounds in prop::collection::vec(prop::collection::vec((0usize..150, -20i64..40), 0..10), 1..6),
            queries in prop::collection::vec((-9i64..10, 0usize..160), 20),
        ) {
            let n = pts.len();
            let mut rt = RangeTree::build(&pts.iter().enumerate().map(|(y, &(x, s))| (x, y, s)).collect::<Vec<_>>()).unwrap();
            let mut scores: Vec<Option<i64>> = pts.iter().map(|p| Some(p.1)).collect();
            rt.audit().unwrap();
            for round in rounds {
                let ups: Vec<(usize, i64)> = round.into_iter().map(|(y, s)| (y % n, s)).collect();
                rt.update_batch(&ups).unwrap();
                for &(y, s) in &ups {
                    scores[y] = Some(s);
                }
                rt.audit().unwrap();
                for &(qx, qy) in &queries {
                    prop_assert_eq!(rt.dominant_max(qx, qy), brute(&pts, &scores, qx, qy));
                }
            }
        }
    }
}
