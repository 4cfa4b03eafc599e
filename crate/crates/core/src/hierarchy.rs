//! Containment hierarchy of maximal threshold intervals of `L`, with the
//! per-`k'` lookup tables used for output-sensitive listing.
//!
//! A node is a maximal range `[lo, hi]` of `L` whose entries are all at
//! least some threshold `ℓ >= 1`. Any two nodes are disjoint or nested.
//! Each node records the number of distinct tags over every tag run it
//! overlaps.

use std::collections::HashMap;

use crate::rmq::offline_distinct_counts;
use crate::runs::{RunRange, TagRunIndex};
use crate::stats::TsEntry;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HierarchyNode {
    pub lo: usize,
    pub hi: usize,
    /// Smallest `L` value inside `[lo, hi]`.
    pub min: usize,
    pub parent: Option<usize>,
    pub runs: RunRange,
    /// Distinct tags over `runs`.
    pub count: usize,
}

/// Where a substring's run range is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// The interval lies within one run.
    Single(usize),
    /// The interval is the maximal range of `L` values `>= width` around this
    /// `L` position.
    At(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// This node overlaps exactly the tags of the query interval.
    Node(usize),
    /// The query has at least `k_max` distinct tags.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct IntervalHierarchy {
    nodes: Vec<HierarchyNode>,
    /// Lowest node containing each `L` position (`NONE` where `L[p] = 0`).
    node_of: Vec<u32>,
    /// `at_least[(k' - 1) * |L| + p]`: lowest node containing `p` with
    /// count `>= k'`.
    at_least: Vec<u32>,
    k_max: usize,
}

/// `max(1, floor(log2 t))`.
pub fn forest_count(t: usize) -> usize {
    (t.max(1).ilog2() as usize).max(1)
}

impl IntervalHierarchy {
    pub fn build(runs: &TagRunIndex, k_max: usize) -> Self {
        let l = runs.l();
        let len = l.len();
        let left = nearest_smaller(l.iter().copied());
        let mut right = nearest_smaller(l.iter().rev().copied());
        right.reverse();
        let right: Vec<Option<usize>> = right.into_iter().map(|x| x.map(|r| len - 1 - r)).collect();

        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut nodes: Vec<HierarchyNode> = Vec::new();
        let mut node_of = vec![NONE; len];
        for p in 0..len {
            if l[p] == 0 {
                continue;
            }
            // Sentinels L[0] = L[2t] = 0 guarantee both neighbours.
            let lo = left[p].expect("sentinel") + 1;
            let hi = right[p].expect("sentinel") - 1;
            let id = *ids.entry((lo, hi)).or_insert_with(|| {
                nodes.push(HierarchyNode {
                    lo,
                    hi,
                    min: l[p],
                    parent: None,
                    runs: runs.runs_of_l_range(lo, hi),
                    count: 0,
                });
                (nodes.len() - 1) as u32
            });
            node_of[p] = id;
        }
        for node in nodes.iter_mut() {
            let (a, b) = (node.lo - 1, node.hi + 1);
            let outer = if l[a] >= l[b] { a } else { b };
            if l[outer] > 0 {
                node.parent = Some(node_of[outer] as usize);
            }
        }
        let ranges: Vec<(usize, usize)> =
            nodes.iter().map(|n| (n.runs.first, n.runs.last)).collect();
        for (node, count) in nodes
            .iter_mut()
            .zip(offline_distinct_counts(runs.tags(), &ranges))
        {
            node.count = count;
        }

        // Parents have strictly smaller minima, so this order visits them first.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_unstable_by_key(|&v| nodes[v].min);
        let mut best = vec![NONE; nodes.len() * k_max];
        for &v in &order {
            for k in 1..=k_max {
                best[v * k_max + k - 1] = if nodes[v].count >= k {
                    v as u32
                } else {
                    nodes[v].parent.map_or(NONE, |u| best[u * k_max + k - 1])
                };
            }
        }
        let mut at_least = vec![NONE; k_max * len];
        for p in 0..len {
            if node_of[p] != NONE {
                let v = node_of[p] as usize;
                for k in 1..=k_max {
                    at_least[(k - 1) * len + p] = best[v * k_max + k - 1];
                }
            }
        }
        IntervalHierarchy {
            nodes,
            node_of,
            at_least,
            k_max,
        }
    }

    pub fn nodes(&self) -> &[HierarchyNode] {
        &self.nodes
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Nodes whose overlapped runs hold exactly `k` distinct tags.
    pub fn forest(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&v| self.nodes[v].count == k)
    }

    /// Lowest node containing `L[p]`.
    pub fn node_at(&self, p: usize) -> Option<usize> {
        (self.node_of[p] != NONE).then(|| self.node_of[p] as usize)
    }

    /// Lowest node containing `L[p]` whose count is at least `k`, for
    /// `1 <= k <= k_max`.
    pub fn lowest_with_count(&self, k: usize, p: usize) -> Option<usize> {
        let v = self.at_least[(k - 1) * self.node_of.len() + p];
        (v != NONE).then_some(v as usize)
    }

    /// Tests `k' = 1, 2, ..., k_max` in turn; the first failing `k'`
    /// identifies a node with the answer's `k' - 1` tags. `probes` counts
    /// table lookups.
    pub fn probe(&self, anchor: usize, width: usize, probes: &mut usize) -> Probe {
        let mut passed = None;
        for k in 1..=self.k_max {
            *probes += 1;
            match self.lowest_with_count(k, anchor) {
                Some(g) if self.nodes[g].min >= width => passed = Some(g),
                _ => return Probe::Node(passed.expect("the anchor's own node qualifies")),
            }
        }
        Probe::Exhausted
    }
}

/// Chooses the `L` position whose maximal `>= width` range is the query's
/// range, from the run and boundary LCPs alone.
pub fn anchor(runs: &TagRunIndex, ts: &TsEntry, width: usize) -> Anchor {
    let q = ts.run;
    let l = runs.l();
    match (ts.up >= width, ts.down >= width) {
        (true, true) => Anchor::At(2 * q + 1),
        (false, true) if l[2 * q + 2] >= width => Anchor::At(2 * q + 2),
        (true, false) if l[2 * q] >= width => Anchor::At(2 * q),
        _ => Anchor::Single(q),
    }
}

/// Index of the nearest strictly smaller value to the left of each entry.
fn nearest_smaller(values: impl Iterator<Item = usize>) -> Vec<Option<usize>> {
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for (i, v) in values.enumerate() {
        while stack.last().is_some_and(|&(_, w)| w >= v) {
            stack.pop();
        }
        out.push(stack.last().map(|&(j, _)| j));
        stack.push((i, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashSet};

    fn random_runs(rng: &mut ChaCha8Rng, t: usize, sigma: u32, max_l: usize) -> TagRunIndex {
        let mut tags: Vec<u32> = Vec::new();
        while tags.len() < t {
            let x = rng.gen_range(0..sigma);
            if tags.last() != Some(&x) || sigma == 1 {
                tags.push(x);
            }
        }
        let mut l: Vec<usize> = (0..2 * t + 1).map(|_| rng.gen_range(0..=max_l)).collect();
        l[0] = 0;
        l[2 * t] = 0;
        TagRunIndex::from_parts(tags, vec![1; t], vec![0; t], vec![0; t], l).unwrap()
    }

    fn maximal_ranges(l: &[usize]) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        let thresholds: BTreeSet<usize> = l.iter().copied().filter(|&v| v > 0).collect();
        for thr in thresholds {
            let mut p = 0;
            while p < l.len() {
                if l[p] >= thr {
                    let start = p;
                    while p < l.len() && l[p] >= thr {
                        p += 1;
                    }
                    out.insert((start, p - 1));
                } else {
                    p += 1;
                }
            }
        }
        out
    }

    fn distinct(tags: &[u32]) -> HashSet<u32> {
        tags.iter().copied().collect()
    }

    #[test]
    fn monotone_valley_is_a_path() {
        let l = vec![0, 5, 4, 3, 2, 3, 4, 5, 0];
        let runs = TagRunIndex::from_parts(vec![0, 1, 2, 3], vec![1; 4], vec![0; 4], vec![0; 4], l)
            .unwrap();
        let h = IntervalHierarchy::build(&runs, 2);
        let roots = h.nodes().iter().filter(|n| n.parent.is_none()).count();
        assert_eq!(roots, 1);
        // Every node except the two deepest leaves has one child.
        let mut children = vec![0; h.nodes().len()];
        for n in h.nodes() {
            if let Some(p) = n.parent {
                children[p] += 1;
            }
        }
        assert!(children.iter().all(|&c| c <= 2));
    }

    #[test]
    fn nodes_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let t = rng.gen_range(1..40);
            let runs = random_runs(&mut rng, t, 5, 6);
            let h = IntervalHierarchy::build(&runs, forest_count(t));
            let got: BTreeSet<(usize, usize)> = h.nodes().iter().map(|n| (n.lo, n.hi)).collect();
            assert_eq!(got.len(), h.nodes().len());
            assert_eq!(got, maximal_ranges(runs.l()));
            for (a, x) in h.nodes().iter().enumerate() {
                let l = runs.l();
                assert_eq!(x.min, *l[x.lo..=x.hi].iter().min().unwrap());
                assert!(l[x.lo - 1] < x.min && l[x.hi + 1] < x.min);
                let r = x.runs;
                assert_eq!(x.count, distinct(&runs.tags()[r.first..=r.last]).len());
                for y in &h.nodes()[a + 1..] {
                    let disjoint = x.hi < y.lo || y.hi < x.lo;
                    let nested = (x.lo <= y.lo && y.hi <= x.hi) || (y.lo <= x.lo && x.hi <= y.hi);
                    assert!(disjoint || nested);
                }
                // Parent is the smallest strict superset.
                let supersets = h
                    .nodes()
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| y.lo <= x.lo && x.hi <= y.hi && (y.lo, y.hi) != (x.lo, x.hi))
                    .min_by_key(|(_, y)| y.hi - y.lo)
                    .map(|(i, _)| i);
                assert_eq!(x.parent, supersets);
            }
        }
    }

    #[test]
    fn lookup_tables_match_climbing() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..200 {
            let t = rng.gen_range(1..50);
            let runs = random_runs(&mut rng, t, 6, 5);
            let k_max = forest_count(t);
            let h = IntervalHierarchy::build(&runs, k_max);
            for p in 0..runs.l().len() {
                for k in 1..=k_max {
                    let mut v = h.node_at(p);
                    while let Some(x) = v {
                        if h.nodes()[x].count >= k {
                            break;
                        }
                        v = h.nodes()[x].parent;
                    }
                    assert_eq!(h.lowest_with_count(k, p), v);
                }
            }
            for k in 1..=k_max {
                assert!(h.forest(k).all(|v| h.nodes()[v].count == k));
            }
        }
    }

    #[test]
    fn probing_finds_equivalent_node() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..300 {
            let t = rng.gen_range(1..60);
            let runs = random_runs(&mut rng, t, 8, 6);
            let k_max = forest_count(t);
            let h = IntervalHierarchy::build(&runs, k_max);
            let l = runs.l();
            for p in 0..l.len() {
                for width in 1..=l[p] {
                    let mut steps = 0;
                    let lo = runs.l_last_below(p, width, &mut steps).unwrap() + 1;
                    let hi = runs.l_first_below(p, width, &mut steps).unwrap() - 1;
                    let r = runs.runs_of_l_range(lo, hi);
                    let want = distinct(&runs.tags()[r.first..=r.last]);
                    let mut probes = 0;
                    match h.probe(p, width, &mut probes) {
                        Probe::Node(g) => {
                            let gr = h.nodes()[g].runs;
                            assert!(r.first <= gr.first && gr.last <= r.last);
                            assert_eq!(distinct(&runs.tags()[gr.first..=gr.last]), want);
                            assert_eq!(probes, want.len() + 1);
                        }
                        Probe::Exhausted => {
                            assert!(want.len() >= k_max);
                            assert_eq!(probes, k_max);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forest_count_values() {
        assert_eq!(forest_count(1), 1);
        assert_eq!(forest_count(3), 1);
        assert_eq!(forest_count(14), 3);
        assert_eq!(forest_count(1024), 10);
    }
}
