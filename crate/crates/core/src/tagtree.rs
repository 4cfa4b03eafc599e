//! Tree over the run ranges a query can fully contain: hierarchy nodes
//! projected onto the runs whose intra-run entry `L[2ρ + 1]` they cover,
//! one leaf per run, and a special root above everything. Node ids are
//! preorder ranks.

use std::collections::BTreeSet;

use crate::hierarchy::IntervalHierarchy;
use crate::rmq::{offline_distinct_counts, SparseTable};
use crate::runs::TagRunIndex;
use crate::text::TagId;

/// Upward pointer of a per-tag virtual tree: from `v` to its lowest
/// ancestor `u` in the same virtual tree, weighted by the total length of
/// the tag's runs under `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TagLink {
    pub v: usize,
    pub u: usize,
    pub weight: u64,
    pub tag: TagId,
}

#[derive(Debug, Clone)]
pub struct TagTree {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    first: Vec<usize>,
    last: Vec<usize>,
    subtree_end: Vec<usize>,
    count: Vec<usize>,
    left_new: Vec<bool>,
    right_new: Vec<bool>,
    leaf_of_run: Vec<usize>,
    euler_first: Vec<usize>,
    euler: SparseTable<(usize, usize)>,
}

impl TagTree {
    pub fn build(runs: &TagRunIndex, hierarchy: &IntervalHierarchy) -> Self {
        let t = runs.run_count();
        let mut ranges: BTreeSet<(usize, std::cmp::Reverse<usize>)> = BTreeSet::new();
        for node in hierarchy.nodes() {
            let first = node.lo / 2;
            let last = (node.hi - 1) / 2;
            if first <= last {
                ranges.insert((first, std::cmp::Reverse(last)));
            }
        }
        for rho in 0..t {
            ranges.insert((rho, std::cmp::Reverse(rho)));
        }
        // The root precedes an equal-range projection, so it stays on top.
        let order: Vec<(usize, usize)> = std::iter::once((0, t - 1))
            .chain(ranges.into_iter().map(|(a, b)| (a, b.0)))
            .collect();
        let size = order.len();

        let mut parent = vec![None; size];
        let mut depth = vec![0; size];
        let mut stack: Vec<usize> = Vec::new();
        for (v, &(first, _)) in order.iter().enumerate() {
            while let Some(&top) = stack.last() {
                if order[top].1 < first {
                    stack.pop();
                } else {
                    break;
                }
            }
            if let Some(&top) = stack.last() {
                parent[v] = Some(top);
                depth[v] = depth[top] + 1;
            }
            stack.push(v);
        }
        let mut subtree_end: Vec<usize> = (0..size).collect();
        for v in (1..size).rev() {
            let p = parent[v].expect("only the root lacks a parent");
            subtree_end[p] = subtree_end[p].max(subtree_end[v]);
        }
        let mut leaf_of_run = vec![0; t];
        for (v, &(a, b)) in order.iter().enumerate() {
            if a == b && v > 0 {
                leaf_of_run[a] = v;
            }
        }

        let tags = runs.tags();
        let count = offline_distinct_counts(tags, &order);
        let mut next_occ = vec![usize::MAX; t];
        let mut prev_occ = vec![None; t];
        let mut seen = std::collections::HashMap::new();
        for (i, &tag) in tags.iter().enumerate() {
            if let Some(j) = seen.insert(tag, i) {
                next_occ[j] = i;
                prev_occ[i] = Some(j);
            }
        }
        let left_new = order
            .iter()
            .map(|&(a, b)| a > 0 && next_occ[a - 1] > b)
            .collect();
        let right_new = order
            .iter()
            .map(|&(a, b)| b + 1 < t && prev_occ[b + 1].is_none_or(|j| j < a))
            .collect();

        // Euler tour for constant-time LCA.
        let mut children = vec![Vec::new(); size];
        for v in 1..size {
            children[parent[v].unwrap()].push(v);
        }
        let mut euler = Vec::with_capacity(2 * size);
        let mut euler_first = vec![0; size];
        let mut walk: Vec<(usize, usize)> = vec![(0, 0)];
        while let Some((v, i)) = walk.pop() {
            if i == 0 {
                euler_first[v] = euler.len();
            }
            euler.push((depth[v], v));
            if i < children[v].len() {
                walk.push((v, i + 1));
                walk.push((children[v][i], 0));
            }
        }

        TagTree {
            parent,
            depth,
            first: order.iter().map(|r| r.0).collect(),
            last: order.iter().map(|r| r.1).collect(),
            subtree_end,
            count,
            left_new,
            right_new,
            leaf_of_run,
            euler_first,
            euler: SparseTable::new(euler),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Runs covered by `v`.
    pub fn runs(&self, v: usize) -> (usize, usize) {
        (self.first[v], self.last[v])
    }

    /// Preorder ranks of `v`'s subtree.
    pub fn subtree(&self, v: usize) -> (usize, usize) {
        (v, self.subtree_end[v])
    }

    pub fn is_ancestor(&self, a: usize, v: usize) -> bool {
        a <= v && v <= self.subtree_end[a]
    }

    pub fn count(&self, v: usize) -> usize {
        self.count[v]
    }

    /// The run just before `v`'s range carries a tag absent from the range.
    pub fn left_new(&self, v: usize) -> bool {
        self.left_new[v]
    }

    /// The run just after `v`'s range carries a tag absent from the range.
    pub fn right_new(&self, v: usize) -> bool {
        self.right_new[v]
    }

    pub fn leaf(&self, run: usize) -> usize {
        self.leaf_of_run[run]
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.euler_first[a], self.euler_first[b]);
        self.euler.min(x.min(y), x.max(y)).1
    }

    /// Node whose range is exactly the runs `s..=e`, when the range is one
    /// a query can contain.
    pub fn node_for(&self, s: usize, e: usize) -> usize {
        self.lca(self.leaf(s), self.leaf(e))
    }

    /// One link per node of every per-tag virtual tree except its root.
    pub fn links(&self, runs: &TagRunIndex) -> Vec<TagLink> {
        let mut by_tag: Vec<Vec<usize>> = Vec::new();
        for (rho, &tag) in runs.tags().iter().enumerate() {
            if by_tag.len() <= tag as usize {
                by_tag.resize(tag as usize + 1, Vec::new());
            }
            by_tag[tag as usize].push(rho);
        }
        let mut links = Vec::new();
        for (tag, tag_runs) in by_tag.iter().enumerate() {
            if tag_runs.is_empty() {
                continue;
            }
            let leaves: Vec<usize> = tag_runs.iter().map(|&r| self.leaf(r)).collect();
            let mut nodes: Vec<usize> = leaves.clone();
            nodes.extend(leaves.windows(2).map(|w| self.lca(w[0], w[1])));
            nodes.push(self.root());
            nodes.sort_unstable();
            nodes.dedup();

            let mut weight = vec![0u64; nodes.len()];
            for (&leaf, &rho) in leaves.iter().zip(tag_runs) {
                let idx = nodes.binary_search(&leaf).unwrap();
                weight[idx] += runs.len_of(rho) as u64;
            }
            let mut up = vec![0usize; nodes.len()];
            let mut stack: Vec<usize> = Vec::new();
            for (idx, &v) in nodes.iter().enumerate() {
                while let Some(&top) = stack.last() {
                    if self.is_ancestor(nodes[top], v) {
                        break;
                    }
                    stack.pop();
                }
                if let Some(&top) = stack.last() {
                    up[idx] = top;
                }
                stack.push(idx);
            }
            for idx in (1..nodes.len()).rev() {
                weight[up[idx]] += weight[idx];
            }
            for idx in 1..nodes.len() {
                links.push(TagLink {
                    v: nodes[idx],
                    u: nodes[up[idx]],
                    weight: weight[idx],
                    tag: tag as TagId,
                });
            }
        }
        links
    }
}
