//! Static 2-D point set answering queries over `x in [x_lo, x_hi]`,
//! `y < y_end`: the best few points by key, or every point whose key passes
//! a threshold. Smaller keys are better, so callers encode "heaviest" with
//! `Reverse`.
//!
//! Segment tree on `x`; each tree node keeps its points sorted by `y` with a
//! sparse table of keys, so a `y`-prefix of a node is one argmin away.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::rmq::SparseTable;
use crate::text::TagId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint<K> {
    pub x: usize,
    pub y: usize,
    pub key: K,
}

#[derive(Debug, Clone)]
struct Bucket<K> {
    ys: Vec<usize>,
    keys: SparseTable<K>,
}

#[derive(Debug, Clone)]
pub struct PointGrid<K> {
    width: usize,
    buckets: Vec<Bucket<K>>,
}

impl<K: Ord + Copy> PointGrid<K> {
    /// `width` bounds the `x` coordinates.
    pub fn new(width: usize, points: &[GridPoint<K>]) -> Self {
        let width = width.max(1);
        let mut sorted: Vec<GridPoint<K>> = points.to_vec();
        sorted.sort_by_key(|p| p.y);
        let mut lists: Vec<Vec<GridPoint<K>>> = vec![Vec::new(); 4 * width];
        for p in &sorted {
            assert!(p.x < width, "point outside the grid");
            let (mut node, mut lo, mut hi) = (1, 0, width - 1);
            loop {
                lists[node].push(*p);
                if lo == hi {
                    break;
                }
                let mid = (lo + hi) / 2;
                if p.x <= mid {
                    node *= 2;
                    hi = mid;
                } else {
                    node = 2 * node + 1;
                    lo = mid + 1;
                }
            }
        }
        let buckets = lists
            .into_iter()
            .map(|list| Bucket {
                ys: list.iter().map(|p| p.y).collect(),
                keys: SparseTable::new(list.iter().map(|p| p.key).collect()),
            })
            .collect();
        PointGrid { width, buckets }
    }

    /// Canonical buckets covering the query, each as `(bucket, prefix len)`.
    fn pieces(&self, x_lo: usize, x_hi: usize, y_end: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if x_lo > x_hi || x_lo >= self.width {
            return out;
        }
        let x_hi = x_hi.min(self.width - 1);
        let mut stack = vec![(1usize, 0usize, self.width - 1)];
        while let Some((node, lo, hi)) = stack.pop() {
            if hi < x_lo || x_hi < lo || self.buckets[node].ys.is_empty() {
                continue;
            }
            if x_lo <= lo && hi <= x_hi {
                let n = self.buckets[node].ys.partition_point(|&y| y < y_end);
                if n > 0 {
                    out.push((node, n));
                }
                continue;
            }
            let mid = (lo + hi) / 2;
            stack.push((2 * node + 1, mid + 1, hi));
            stack.push((2 * node, lo, mid));
        }
        out
    }

    /// Up to `k` smallest keys in the range, smallest first.
    pub fn best(&self, x_lo: usize, x_hi: usize, y_end: usize, k: usize) -> Vec<K> {
        let mut heap = BinaryHeap::new();
        let push = |heap: &mut BinaryHeap<_>, bucket: usize, lo: usize, hi: usize| {
            if lo <= hi {
                let keys = &self.buckets[bucket].keys;
                let at = keys.argmin(lo, hi);
                heap.push(Reverse((keys.key(at), bucket, lo, hi, at)));
            }
        };
        for (bucket, n) in self.pieces(x_lo, x_hi, y_end) {
            push(&mut heap, bucket, 0, n - 1);
        }
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let Some(Reverse((key, bucket, lo, hi, at))) = heap.pop() else {
                break;
            };
            out.push(key);
            if at > lo {
                push(&mut heap, bucket, lo, at - 1);
            }
            push(&mut heap, bucket, at + 1, hi);
        }
        out
    }

    /// Every key in the range for which `keep` holds, given that `keep`
    /// holding for a key implies it holds for all smaller keys.
    pub fn report(
        &self,
        x_lo: usize,
        x_hi: usize,
        y_end: usize,
        keep: impl Fn(&K) -> bool,
    ) -> Vec<K> {
        let mut out = Vec::new();
        for (bucket, n) in self.pieces(x_lo, x_hi, y_end) {
            let keys = &self.buckets[bucket].keys;
            let mut stack = vec![(0usize, n - 1)];
            while let Some((lo, hi)) = stack.pop() {
                let at = keys.argmin(lo, hi);
                let key = keys.key(at);
                if !keep(&key) {
                    continue;
                }
                out.push(key);
                if at > lo {
                    stack.push((lo, at - 1));
                }
                if at < hi {
                    stack.push((at + 1, hi));
                }
            }
        }
        out
    }
}

/// Tag-weighted points ranked by weight; ties go to the smaller tag, then
/// the smaller `x`.
#[derive(Debug, Clone)]
pub struct WeightedGrid {
    weights: Vec<u64>,
    grid: PointGrid<(Reverse<u32>, TagId, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedPoint {
    pub x: usize,
    pub y: usize,
    pub weight: u64,
    pub tag: TagId,
}

impl WeightedGrid {
    pub fn new(width: usize, points: &[WeightedPoint]) -> Self {
        let mut weights: Vec<u64> = points.iter().map(|p| p.weight).collect();
        weights.sort_unstable();
        weights.dedup();
        let keyed: Vec<GridPoint<_>> = points
            .iter()
            .map(|p| GridPoint {
                x: p.x,
                y: p.y,
                key: (Reverse(dense_rank(&weights, p.weight)), p.tag, p.x),
            })
            .collect();
        WeightedGrid {
            grid: PointGrid::new(width, &keyed),
            weights,
        }
    }

    /// Rank of a weight among the distinct point weights.
    pub fn weight_rank(&self, weight: u64) -> u32 {
        dense_rank(&self.weights, weight)
    }

    /// The `k` heaviest `(tag, weight)` points with `x in [x_lo, x_hi]` and
    /// `y < y_end`, heaviest first.
    pub fn heaviest(&self, x_lo: usize, x_hi: usize, y_end: usize, k: usize) -> Vec<(TagId, u64)> {
        self.grid
            .best(x_lo, x_hi, y_end, k)
            .into_iter()
            .map(|(Reverse(rank), tag, _)| (tag, self.weights[rank as usize]))
            .collect()
    }
}

fn dense_rank(sorted: &[u64], w: u64) -> u32 {
    sorted.binary_search(&w).expect("weight present") as u32
}
