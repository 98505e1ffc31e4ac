//! Range tree whose inner structures are vEB staircases.
//!
//! The outer tree is a static balanced tree over the points in (x ascending,
//! y descending) order; each node owns the contiguous run of positions
//! below it. Node keys are relabeled to the rank of y among the node's own
//! points, so a node of `s` points uses a staircase over `[0, s)`.
//!
//! With y descending among equal x, every position left of point `j` either
//! has a smaller x or a larger y, so for `j`'s own query the left siblings
//! along its root path are exactly the in-range subtrees.

use crate::par;
use crate::staircase::{Point, Staircase};
use crate::{Error, Result, Scored};

#[derive(Clone, Debug)]
struct Node {
    lo: usize,
    hi: usize,
    depth: usize,
    /// The node's point ids in increasing order: local key `k` is `ys[k]`.
    ys: Vec<u32>,
    stair: Staircase,
    children: Option<Box<(Node, Node)>>,
}

#[derive(Clone, Debug)]
pub struct RangeVebTree {
    n: usize,
    depth: usize,
    /// x of each position, in outer order.
    xs: Vec<i64>,
    /// `pos[y]` is the position of point `y`.
    pos: Vec<u32>,
    /// `local[d * n + y]` is the local key of `y` in its depth-`d` host.
    local: Vec<u32>,
    scores: Vec<Option<i64>>,
    root: Node,
    veb_visits: u64,
}

impl Node {
    fn build(order: &[u32], lo: usize, hi: usize, depth: usize) -> Result<Node> {
        let (ys, children) = if hi - lo == 1 {
            (vec![order[lo]], None)
        } else {
            let mid = lo + (hi - lo).div_ceil(2);
            let (l, r) = par::join_if(
                hi - lo > par::GRAIN,
                || Node::build(order, lo, mid, depth + 1),
                || Node::build(order, mid, hi, depth + 1),
            );
            let (l, r) = (l?, r?);
            let mut ys = Vec::with_capacity(hi - lo);
            let (mut i, mut j) = (0, 0);
            while i < l.ys.len() || j < r.ys.len() {
                if j == r.ys.len() || (i < l.ys.len() && l.ys[i] < r.ys[j]) {
                    ys.push(l.ys[i]);
                    i += 1;
                } else {
                    ys.push(r.ys[j]);
                    j += 1;
                }
            }
            (ys, Some(Box::new((l, r))))
        };
        Ok(Node { lo, hi, depth, stair: Staircase::new(hi - lo)?, ys, children })
    }

    fn fill_local(&self, n: usize, local: &mut [u32]) {
        for (k, &y) in self.ys.iter().enumerate() {
            local[self.depth * n + y as usize] = k as u32;
        }
        if let Some(c) = &self.children {
            c.0.fill_local(n, local);
            c.1.fill_local(n, local);
        }
    }

    /// `batch` is sorted by point id and lies inside this node.
    fn update(&mut self, batch: &[(u32, i64)], pos: &[u32], local: &[u32], n: usize) -> u64 {
        if batch.is_empty() {
            return 0;
        }
        let Node { stair, children, depth, .. } = self;
        let pts: Vec<Point> =
            batch.iter().map(|&(y, dp)| Point::new(local[*depth * n + y as usize] as u64, dp, y as usize)).collect();
        let Some(c) = children else {
            return stair.apply_update_raw(&pts);
        };
        let mid = c.1.lo;
        let (left, right): (Vec<_>, Vec<_>) = batch.iter().partition(|&&(y, _)| (pos[y as usize] as usize) < mid);
        let (a, (b, d)) = par::join_if(
            batch.len() > 64,
            || stair.apply_update_raw(&pts),
            || {
                let (l, r) = &mut **c;
                par::join_if(batch.len() > 64, || l.update(&left, pos, local, n), || r.update(&right, pos, local, n))
            },
        );
        a + b + d
    }

    fn query(&self, cnt: usize, qy: u32) -> Option<Scored> {
        if self.lo >= cnt {
            return None;
        }
        if self.hi <= cnt {
            return self.stair.prefix_best(self.ys.partition_point(|&y| y < qy) as u64);
        }
        let c = self.children.as_ref()?;
        Scored::best_of(c.0.query(cnt, qy), c.1.query(cnt, qy))
    }

    fn audit(&self, out: &mut Vec<usize>) -> std::result::Result<(), String> {
        self.stair.audit()?;
        if self.ys.len() != self.hi - self.lo || self.ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("node [{}, {}) relabel table is not a sorted id list", self.lo, self.hi));
        }
        if self.stair.len() > self.stair.n_star() {
            return Err("staircase exceeds its universe".into());
        }
        out.push(self.stair.n_star());
        if let Some(c) = &self.children {
            c.0.audit(out)?;
            c.1.audit(out)?;
        }
        Ok(())
    }
}

impl RangeVebTree {
    /// Points `(x = values[y], y)` with empty staircases.
    pub fn with_values(values: &[i64]) -> Result<Self> {
        let pts: Vec<(i64, usize)> = values.iter().copied().zip(0..).collect();
        Self::build(&pts)
    }

    /// Points `(x, y)` with `y` ranging over exactly `0..n`.
    pub fn build(points: &[(i64, usize)]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if n >= u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("{n} points exceed the id range")));
        }
        let mut seen = vec![false; n];
        for &(_, y) in points {
            if y >= n {
                return Err(Error::UnknownPoint(y));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(Error::DuplicateCoordinate(y));
            }
        }
        let mut sorted: Vec<(i64, usize)> = points.to_vec();
        sorted.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let order: Vec<u32> = sorted.iter().map(|p| p.1 as u32).collect();
        let mut pos = vec![0u32; n];
        for (i, &y) in order.iter().enumerate() {
            pos[y as usize] = i as u32;
        }
        let root = Node::build(&order, 0, n, 0)?;
        let depth = n.next_power_of_two().trailing_zeros() as usize + 1;
        let mut local = vec![0u32; depth * n];
        root.fill_local(n, &mut local);
        Ok(RangeVebTree {
            n,
            depth,
            xs: sorted.iter().map(|p| p.0).collect(),
            pos,
            local,
            scores: vec![None; n],
            root,
            veb_visits: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn score(&self, y: usize) -> Option<i64> {
        self.scores.get(y).copied().flatten()
    }

    pub fn veb_visits(&self) -> u64 {
        self.veb_visits
    }

    /// Node universe sizes in preorder.
    pub fn node_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(v) = stack.pop() {
            out.push(v.hi - v.lo);
            if let Some(c) = &v.children {
                stack.push(&c.1);
                stack.push(&c.0);
            }
        }
        out
    }

    /// Sum of staircase universes over all nodes.
    pub fn space(&self) -> usize {
        self.node_sizes().iter().sum()
    }

    /// Best score with `x < qx` and `y < qy`, ties to the smallest `y`.
    pub fn dominant_max(&self, qx: i64, qy: usize) -> Option<Scored> {
        let cnt = self.xs.partition_point(|&x| x < qx);
        self.root.query(cnt, qy.min(u32::MAX as usize) as u32)
    }

    /// [`dominant_max`](Self::dominant_max) at point `y`'s own corner, read
    /// off the root path with one table lookup per level.
    pub fn dominant_max_point(&self, y: usize) -> Option<Scored> {
        let p = self.pos[y] as usize;
        let mut node = &self.root;
        let mut best = None;
        while let Some(c) = &node.children {
            if p < c.1.lo {
                node = &c.0;
            } else {
                let d = node.depth;
                let q = self.local[d * self.n + y] - self.local[(d + 1) * self.n + y];
                best = Scored::best_of(best, c.0.stair.prefix_best(q as u64));
                node = &c.1;
            }
        }
        best
    }

    /// Offers new scores. Each point goes to every staircase on its root
    /// path, split top-down so every node's list stays sorted by id.
    pub fn update_batch(&mut self, updates: &[(usize, i64)]) -> Result<()> {
        let mut batch: Vec<(u32, i64)> = Vec::with_capacity(updates.len());
        for &(y, dp) in updates {
            if y >= self.n {
                return Err(Error::UnknownPoint(y));
            }
            if let Some(old) = self.scores[y].filter(|&old| old > dp) {
                return Err(Error::ScoreDecrease { key: y as u64, old, new: dp });
            }
            batch.push((y as u32, dp));
        }
        batch.sort_unstable_by_key(|u| u.0);
        if let Some(w) = batch.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateCoordinate(w[0].0 as usize));
        }
        let visits = self.root.update(&batch, &self.pos, &self.local, self.n);
        for &(y, dp) in &batch {
            self.scores[y as usize] = Some(dp);
        }
        self.veb_visits += visits;
        Ok(())
    }

    /// Checks every staircase, relabel table, and the space bound.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut sizes = Vec::new();
        self.root.audit(&mut sizes)?;
        let cap = self.n * self.depth;
        let total: usize = sizes.iter().sum();
        if total > cap {
            return Err(format!("staircase universes total {total} > {cap}"));
        }
        Ok(())
    }
}
