use super::VebTree;
use crate::par::{self, GRAIN};

struct Node {
    key: u64,
    size: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

fn size(n: &Option<Box<Node>>) -> usize {
    n.as_ref().map_or(0, |n| n.size)
}

impl VebTree {
    /// All keys in `[kl, kr]`, ascending. Bounds past the universe are
    /// clamped; `kl > kr` gives an empty list.
    pub fn range_query(&self, kl: u64, kr: u64) -> Vec<u64> {
        let u = self.universe();
        if self.is_empty() || kl > kr || kl >= u {
            return Vec::new();
        }
        let kr = kr.min(u - 1);
        let a = if self.member_raw(kl) { Some(kl) } else { self.succ_raw(kl, &mut 0) };
        let b = if self.member_raw(kr) { Some(kr) } else { self.pred_raw(kr, &mut 0) };
        let (Some(a), Some(b)) = (a, b) else { return Vec::new() };
        let tree = self.build_range(a, b);
        let mut out = vec![0u64; size(&tree)];
        if let Some(t) = &tree {
            flatten(t, &mut out);
        }
        out
    }

    /// Balanced tree over the keys in `[a, b]`, split at the key nearest
    /// below the midpoint.
    fn build_range(&self, a: u64, b: u64) -> Option<Box<Node>> {
        if a > b {
            return None;
        }
        if a == b {
            return Some(Box::new(Node { key: a, size: 1, left: None, right: None }));
        }
        let mid = self.pred_raw(a + (b - a).div_ceil(2), &mut 0).expect("a lies below the midpoint");
        let (left, right) = par::join_if(
            b - a > GRAIN as u64,
            || match self.pred_raw(mid, &mut 0) {
                Some(p) if p >= a => self.build_range(a, p),
                _ => None,
            },
            || match self.succ_raw(mid, &mut 0) {
                Some(s) if s <= b => self.build_range(s, b),
                _ => None,
            },
        );
        let size = 1 + size(&left) + size(&right);
        Some(Box::new(Node { key: mid, size, left, right }))
    }
}

fn flatten(node: &Node, out: &mut [u64]) {
    let (l, rest) = out.split_at_mut(size(&node.left));
    rest[0] = node.key;
    let r = &mut rest[1..];
    par::join_if(
        node.size > GRAIN,
        || {
            if let Some(n) = &node.left {
                flatten(n, l);
            }
        },
        || {
            if let Some(n) = &node.right {
                flatten(n, r);
            }
        },
    );
}
