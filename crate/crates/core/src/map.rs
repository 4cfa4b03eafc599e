//! The assembled index and per-pattern query sessions.
//!
//! Substring arguments `(i, j)` are 0-based and inclusive. A query returns
//! `Ok(None)` when `P[i..=j]` does not occur in the text.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frequent::{compute_fms, TripleIndex};
use crate::grid::{WeightedGrid, WeightedPoint};
use crate::hierarchy::{anchor, forest_count, Anchor, IntervalHierarchy, Probe};
use crate::listing::DistinctLister;
use crate::rlbwt::Rlbwt;
use crate::runs::{RunRange, TagRunIndex};
use crate::slp::{random_base, PatternHashes, Slp};
use crate::stats::{compute_tag_statistics, compute_xms, find_mems, Mem, TsEntry, XmsEntry};
use crate::tagtree::{TagLink, TagTree};
use crate::text::{SuffixArray, TagArray, TagDict, TagId, TaggedText};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Occurrence threshold for [`Session::frequent_tags`].
    pub f: usize,
    /// Seeds the fingerprint base.
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { f: 1, seed: 0x5eed }
    }
}

/// Size parameters of an index. `n` counts the terminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapStats {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub g: usize,
    pub f: usize,
}

#[derive(Debug, Clone)]
pub struct WheelerMap {
    dict: TagDict,
    bwt: Rlbwt,
    slp: Slp,
    runs: TagRunIndex,
    triples: TripleIndex,
    lister: DistinctLister,
    hierarchy: IntervalHierarchy,
    tree: TagTree,
    grid: WeightedGrid,
    runs_by_tag: Vec<Vec<usize>>,
}

impl WheelerMap {
    pub fn build(tt: &TaggedText, options: &BuildOptions) -> Result<Self> {
        if options.f == 0 {
            return Err(Error::InvalidFrequency(0));
        }
        let text = tt.text();
        let sa = SuffixArray::build(text);
        let tag_array = TagArray::build(tt, &sa);
        let bwt = Rlbwt::build(text, &sa);
        let base = random_base(&mut ChaCha8Rng::seed_from_u64(options.seed));
        let slp = Slp::build(text, base);
        let runs = TagRunIndex::build(tag_array.as_slice(), &sa, text);
        let triples = TripleIndex::build(options.f, &runs, tag_array.as_slice(), &sa, text)?;
        Self::from_parts(tt.dict().clone(), bwt, slp, runs, triples)
    }

    /// Assembles an index from its stored components, rebuilding the
    /// structures derived from them.
    pub fn from_parts(
        dict: TagDict,
        bwt: Rlbwt,
        slp: Slp,
        runs: TagRunIndex,
        triples: TripleIndex,
    ) -> Result<Self> {
        let n = bwt.len();
        if slp.len() != n || runs.lens().iter().sum::<usize>() != n {
            return Err(Error::Format(
                "components disagree on the text length".into(),
            ));
        }
        if triples.entries().len() != 2 * runs.run_count() {
            return Err(Error::Format(
                "triple array does not match the tag runs".into(),
            ));
        }
        if runs.tags().iter().any(|&tag| tag as usize >= dict.len()) {
            return Err(Error::Format("tag outside the dictionary".into()));
        }
        let lister = DistinctLister::new(runs.tags());
        let hierarchy = IntervalHierarchy::build(&runs, forest_count(runs.run_count()));
        let tree = TagTree::build(&runs, &hierarchy);
        let points: Vec<WeightedPoint> = tree
            .links(&runs)
            .into_iter()
            .map(|link| WeightedPoint {
                x: link.v,
                y: tree.depth(link.u),
                weight: link.weight,
                tag: link.tag,
            })
            .collect();
        let grid = WeightedGrid::new(tree.len(), &points);
        let mut runs_by_tag = vec![Vec::new(); dict.len()];
        for (rho, &tag) in runs.tags().iter().enumerate() {
            runs_by_tag[tag as usize].push(rho);
        }
        Ok(WheelerMap {
            dict,
            bwt,
            slp,
            runs,
            triples,
            lister,
            hierarchy,
            tree,
            grid,
            runs_by_tag,
        })
    }

    pub fn stats(&self) -> MapStats {
        MapStats {
            n: self.bwt.len(),
            r: self.bwt.run_count(),
            t: self.runs.run_count(),
            g: self.slp.rule_count(),
            f: self.triples.f(),
        }
    }

    pub fn dict(&self) -> &TagDict {
        &self.dict
    }

    pub fn bwt(&self) -> &Rlbwt {
        &self.bwt
    }

    pub fn slp(&self) -> &Slp {
        &self.slp
    }

    pub fn runs(&self) -> &TagRunIndex {
        &self.runs
    }

    pub fn triples(&self) -> &TripleIndex {
        &self.triples
    }

    pub fn hierarchy(&self) -> &IntervalHierarchy {
        &self.hierarchy
    }

    pub fn tree(&self) -> &TagTree {
        &self.tree
    }

    pub fn links(&self) -> Vec<TagLink> {
        self.tree.links(&self.runs)
    }

    /// Preprocesses `pattern` (matching and tag statistics) for substring
    /// queries.
    pub fn session(&self, pattern: &[u8]) -> Result<Session<'_>> {
        let hashes = PatternHashes::new(pattern, self.slp.base());
        let xms = compute_xms(&self.bwt, &self.slp, pattern, &hashes)?;
        let ts = compute_tag_statistics(&xms, &self.runs, &self.slp, &hashes)?;
        Ok(Session {
            map: self,
            pattern: pattern.to_vec(),
            xms,
            ts,
            fms: OnceLock::new(),
        })
    }
}

/// Operation counts of one query. `probes` are forest lookups, `visits`
/// are ranges examined by the distinct lister, `navigation` counts min-tree
/// nodes touched while locating a run range, and `ops` counts the
/// constant-time steps of distinct counting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Work {
    pub probes: usize,
    pub visits: usize,
    pub navigation: usize,
    pub ops: usize,
}

/// Occurrence count of a top-k candidate. Tags of partially overlapped
/// boundary runs only have a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Exact(u64),
    AtLeast(u64),
}

impl Weight {
    pub fn value(&self) -> u64 {
        match *self {
            Weight::Exact(w) | Weight::AtLeast(w) => w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub tag: TagId,
    pub weight: Weight,
}

pub struct Session<'a> {
    map: &'a WheelerMap,
    pattern: Vec<u8>,
    xms: Vec<XmsEntry>,
    ts: Vec<TsEntry>,
    fms: OnceLock<Vec<usize>>,
}

impl<'a> Session<'a> {
    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn xms(&self) -> &[XmsEntry] {
        &self.xms
    }

    pub fn ts(&self) -> &[TsEntry] {
        &self.ts
    }

    pub fn mems(&self) -> Vec<Mem> {
        find_mems(&self.xms)
    }

    /// Longest prefix of each pattern suffix occurring at least `f` times.
    pub fn fms(&self) -> &[usize] {
        self.fms
            .get_or_init(|| compute_fms(&self.map.bwt, &self.pattern, self.map.triples.f()))
    }

    fn width(&self, i: usize, j: usize) -> Result<usize> {
        if i > j || j >= self.pattern.len() {
            return Err(Error::InvalidSubstring {
                i,
                j,
                m: self.pattern.len(),
            });
        }
        Ok(j - i + 1)
    }

    pub fn run_range(&self, i: usize, j: usize) -> Result<Option<RunRange>> {
        self.run_range_counted(i, j, &mut Work::default())
    }

    pub fn run_range_counted(
        &self,
        i: usize,
        j: usize,
        work: &mut Work,
    ) -> Result<Option<RunRange>> {
        let width = self.width(i, j)?;
        Ok(self
            .map
            .runs
            .run_range(&self.ts[i], width, &mut work.navigation))
    }

    /// Distinct tags via the run range and the distinct lister, ordered by
    /// first occurrence.
    pub fn distinct_tags_via_runs(&self, i: usize, j: usize) -> Result<Option<Vec<TagId>>> {
        self.distinct_tags_via_runs_counted(i, j, &mut Work::default())
    }

    pub fn distinct_tags_via_runs_counted(
        &self,
        i: usize,
        j: usize,
        work: &mut Work,
    ) -> Result<Option<Vec<TagId>>> {
        Ok(self
            .run_range_counted(i, j, work)?
            .map(|r| self.map.lister.list(r.first, r.last, &mut work.visits)))
    }

    /// Distinct tags in time proportional to their number, ordered by first
    /// occurrence within the run range that answered the query.
    pub fn distinct_tags(&self, i: usize, j: usize) -> Result<Option<Vec<TagId>>> {
        self.distinct_tags_counted(i, j, &mut Work::default())
    }

    /// As [`Session::distinct_tags`]; `probes + visits <= 4k` for `k` tags.
    pub fn distinct_tags_counted(
        &self,
        i: usize,
        j: usize,
        work: &mut Work,
    ) -> Result<Option<Vec<TagId>>> {
        let width = self.width(i, j)?;
        let ts = &self.ts[i];
        if ts.len < width {
            return Ok(None);
        }
        let map = self.map;
        let tags = match anchor(&map.runs, ts, width) {
            Anchor::Single(q) => {
                work.visits += 1;
                vec![map.runs.tag(q)]
            }
            Anchor::At(p) => {
                let range = match map.hierarchy.probe(p, width, &mut work.probes) {
                    Probe::Node(g) => map.hierarchy.nodes()[g].runs,
                    Probe::Exhausted => map
                        .runs
                        .run_range(ts, width, &mut work.navigation)
                        .expect("the substring occurs"),
                };
                map.lister.list(range.first, range.last, &mut work.visits)
            }
        };
        Ok(Some(tags))
    }

    /// [`Session::distinct_tags`] reordered by first occurrence within the
    /// query's own run range.
    pub fn list(&self, i: usize, j: usize) -> Result<Option<Vec<TagId>>> {
        let Some(mut tags) = self.distinct_tags(i, j)? else {
            return Ok(None);
        };
        let range = self.run_range(i, j)?.expect("the substring occurs");
        let runs_by_tag = &self.map.runs_by_tag;
        tags.sort_by_cached_key(|&tag| {
            let runs = &runs_by_tag[tag as usize];
            runs[runs.partition_point(|&rho| rho < range.first)]
        });
        Ok(Some(tags))
    }

    pub fn count_distinct(&self, i: usize, j: usize) -> Result<Option<usize>> {
        self.count_distinct_counted(i, j, &mut Work::default())
    }

    /// After the run range is located, at most six constant-time steps
    /// (counted in `work.ops`).
    pub fn count_distinct_counted(
        &self,
        i: usize,
        j: usize,
        work: &mut Work,
    ) -> Result<Option<usize>> {
        let Some(range) = self.run_range_counted(i, j, work)? else {
            return Ok(None);
        };
        Ok(Some(self.map.count_in(&range, work)))
    }

    /// At most `k + 2` candidates that include the `k` tags labeling the most
    /// occurrences (ties broken towards the smaller tag id).
    pub fn top_k(&self, i: usize, j: usize, k: usize) -> Result<Option<Vec<Candidate>>> {
        let Some(range) = self.run_range(i, j)? else {
            return Ok(None);
        };
        Ok(Some(self.map.top_k_in(&range, k)))
    }

    /// Tags labeling at least `f` occurrences, ordered by first occurrence.
    pub fn frequent_tags(&self, i: usize, j: usize) -> Result<Option<Vec<TagId>>> {
        let width = self.width(i, j)?;
        let Some(range) = self.run_range(i, j)? else {
            return Ok(None);
        };
        let map = self.map;
        let tags = match TripleIndex::interval(&range) {
            None => {
                if self.fms()[i] >= width {
                    vec![map.runs.tag(range.first)]
                } else {
                    Vec::new()
                }
            }
            Some((u, v)) => map
                .triples
                .dominating(u, v, width)
                .into_iter()
                .map(|k| map.triples.entries()[k].tag)
                .collect(),
        };
        Ok(Some(tags))
    }

    /// Triple-array interval of the query; `None` when the substring is
    /// absent or lies in one run.
    pub fn triple_interval(&self, i: usize, j: usize) -> Result<Option<(usize, usize)>> {
        Ok(self
            .run_range(i, j)?
            .and_then(|r| TripleIndex::interval(&r)))
    }
}

impl WheelerMap {
    fn count_in(&self, range: &RunRange, work: &mut Work) -> usize {
        work.ops += 1;
        if range.is_single() {
            return 1;
        }
        let Some((s, e)) = range.contained() else {
            // Two adjacent, partially overlapped runs; adjacent tags differ.
            return 2;
        };
        let x = self.tree.node_for(s, e);
        debug_assert_eq!(self.tree.runs(x), (s, e));
        let left = range.first_partial && self.tree.left_new(x);
        let right = range.last_partial && self.tree.right_new(x);
        work.ops += 5;
        let same = left && right && self.runs.tag(s - 1) == self.runs.tag(e + 1);
        self.tree.count(x) + usize::from(left) + usize::from(right) - usize::from(same)
    }

    fn top_k_in(&self, range: &RunRange, k: usize) -> Vec<Candidate> {
        let runs = &self.runs;
        if range.is_single() {
            let q = range.first;
            let weight = if range.first_partial || range.last_partial {
                Weight::AtLeast(1)
            } else {
                Weight::Exact(runs.len_of(q) as u64)
            };
            return vec![Candidate {
                tag: runs.tag(q),
                weight,
            }];
        }
        let mut out: Vec<Candidate> = match range.contained() {
            None => Vec::new(),
            Some((s, e)) => {
                let x = self.tree.node_for(s, e);
                let (lo, hi) = self.tree.subtree(x);
                self.grid
                    .heaviest(lo, hi, self.tree.depth(x), k)
                    .into_iter()
                    .map(|(tag, w)| Candidate {
                        tag,
                        weight: Weight::Exact(w),
                    })
                    .collect()
            }
        };
        let boundary = [
            (range.first_partial, range.first),
            (range.last_partial, range.last),
        ];
        for (partial, rho) in boundary {
            if !partial {
                continue;
            }
            let tag = runs.tag(rho);
            match out.iter_mut().find(|c| c.tag == tag) {
                Some(c) => c.weight = Weight::AtLeast(c.weight.value() + 1),
                None => out.push(Candidate {
                    tag,
                    weight: Weight::AtLeast(1),
                }),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use rand::Rng;

    fn random_instance(rng: &mut ChaCha8Rng) -> TaggedText {
        let base_len = rng.gen_range(5..60);
        let base: Vec<u8> = (0..base_len)
            .map(|_| b"ACGT"[rng.gen_range(0..4)])
            .collect();
        let seqs: Vec<Vec<u8>> = (0..rng.gen_range(1..5))
            .map(|_| {
                let mut s = base.clone();
                for _ in 0..rng.gen_range(0..4) {
                    let at = rng.gen_range(0..s.len());
                    s[at] = b"ACGT"[rng.gen_range(0..4)];
                }
                s
            })
            .collect();
        let ntags = rng.gen_range(1..6);
        let anns: Vec<Vec<String>> = seqs
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|_| format!("g{}", rng.gen_range(0..ntags)))
                    .collect()
            })
            .collect();
        TaggedText::from_sequences(&seqs, &anns).unwrap()
    }

    #[test]
    fn queries_agree_with_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..60 {
            let tt = random_instance(&mut rng);
            let oracle = Oracle::new(&tt).unwrap();
            let f = rng.gen_range(1..4);
            let map = WheelerMap::build(&tt, &BuildOptions { f, seed: 3 }).unwrap();
            let text = tt.text();
            for _ in 0..10 {
                let start = rng.gen_range(0..text.len());
                let mut p: Vec<u8> = text[start..]
                    .iter()
                    .take_while(|&&c| !crate::text::is_reserved(c))
                    .take(12)
                    .copied()
                    .collect();
                if p.is_empty() || rng.gen_bool(0.3) {
                    p.push(b"ACGT"[rng.gen_range(0..4)]);
                }
                let session = map.session(&p).unwrap();
                for i in 0..p.len() {
                    for j in i..p.len() {
                        let sub = &p[i..=j];
                        assert_eq!(session.list(i, j).unwrap(), oracle.distinct(sub));
                        assert_eq!(
                            session.distinct_tags_via_runs(i, j).unwrap(),
                            oracle.distinct(sub)
                        );
                        assert_eq!(session.count_distinct(i, j).unwrap(), oracle.count(sub));
                        assert_eq!(
                            session.frequent_tags(i, j).unwrap(),
                            oracle.frequent(sub, f)
                        );
                        assert_eq!(session.run_range(i, j).unwrap(), oracle.run_range(sub));
                        let mut fast = session.distinct_tags(i, j).unwrap();
                        if let Some(v) = fast.as_mut() {
                            v.sort_unstable();
                        }
                        let mut slow = oracle.distinct(sub);
                        if let Some(v) = slow.as_mut() {
                            v.sort_unstable();
                        }
                        assert_eq!(fast, slow);
                    }
                }
            }
        }
    }

    #[test]
    fn top_k_contains_the_heaviest_tags() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for _ in 0..60 {
            let tt = random_instance(&mut rng);
            let oracle = Oracle::new(&tt).unwrap();
            let map = WheelerMap::build(&tt, &BuildOptions::default()).unwrap();
            let text = tt.text();
            let start = rng.gen_range(0..text.len());
            let p: Vec<u8> = text[start..]
                .iter()
                .take_while(|&&c| !crate::text::is_reserved(c))
                .take(8)
                .copied()
                .collect();
            if p.is_empty() {
                continue;
            }
            let session = map.session(&p).unwrap();
            for i in 0..p.len() {
                for j in i..p.len() {
                    let ranked = oracle.ranked(&p[i..=j]).unwrap();
                    for k in 1..4 {
                        let got = session.top_k(i, j, k).unwrap().unwrap();
                        assert!(got.len() <= k + 2);
                        for &(tag, _) in ranked.iter().take(k) {
                            assert!(got.iter().any(|c| c.tag == tag), "missing tag {tag}");
                        }
                        for c in &got {
                            let truth = ranked.iter().find(|x| x.0 == c.tag).unwrap().1 as u64;
                            match c.weight {
                                Weight::Exact(w) => assert_eq!(w, truth),
                                Weight::AtLeast(w) => assert!(w <= truth),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_substrings_rejected() {
        let tt = TaggedText::from_sequences(&["ACGT"], &[vec!["a"; 4]]).unwrap();
        let map = WheelerMap::build(&tt, &BuildOptions::default()).unwrap();
        let s = map.session(b"ACG").unwrap();
        assert!(matches!(s.list(2, 1), Err(Error::InvalidSubstring { .. })));
        assert!(matches!(
            s.count_distinct(0, 3),
            Err(Error::InvalidSubstring { .. })
        ));
        assert!(matches!(
            WheelerMap::build(&tt, &BuildOptions { f: 0, seed: 0 }),
            Err(Error::InvalidFrequency(0))
        ));
    }
}
