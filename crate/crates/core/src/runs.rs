//! Run-condensed tag array and the interleaved LCP array `L` that locates
//! the tag runs overlapped by a substring's suffix-array interval without
//! ever computing that interval.
//!
//! With `t` runs, `L` has `2t + 1` entries: `L[0] = L[2t] = 0`,
//! `L[2ρ + 1] = W[ρ]` (LCP of the first and last suffix of run `ρ`) and
//! `L[2ρ + 2] = B[ρ]` (LCP across the boundary between runs `ρ` and `ρ + 1`).
//! All LCPs stop at separators and at the terminator.

use crate::error::{Error, Result};
use crate::rmq::{MinTree, SparseTable};
use crate::stats::TsEntry;
use crate::text::{searchable_lcp, searchable_lengths, SuffixArray, TagId};

/// Tag runs overlapped by a suffix-array interval. A partial run has at
/// least one row outside the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunRange {
    pub first: usize,
    pub last: usize,
    pub first_partial: bool,
    pub last_partial: bool,
}

impl RunRange {
    pub fn is_single(&self) -> bool {
        self.first == self.last
    }

    /// Runs lying entirely inside the interval, if any.
    pub fn contained(&self) -> Option<(usize, usize)> {
        let s = self.first + usize::from(self.first_partial);
        let e = (self.last + 1).checked_sub(1 + usize::from(self.last_partial))?;
        (s <= e).then_some((s, e))
    }
}

#[derive(Debug, Clone)]
pub struct TagRunIndex {
    tags: Vec<TagId>,
    lens: Vec<usize>,
    /// First row of each run, followed by the total row count.
    starts: Vec<usize>,
    sa_at_start: Vec<usize>,
    sa_at_end: Vec<usize>,
    l: Vec<usize>,
    l_tree: MinTree,
}

impl TagRunIndex {
    pub fn build(tag_array: &[TagId], sa: &SuffixArray, text: &[u8]) -> Self {
        let lcp = searchable_lcp(text, sa);
        let dist = searchable_lengths(text);
        let lcp_min = SparseTable::new(lcp.clone());
        let mut tags = Vec::new();
        let mut lens: Vec<usize> = Vec::new();
        for &tag in tag_array {
            if tags.last() == Some(&tag) {
                *lens.last_mut().unwrap() += 1;
            } else {
                tags.push(tag);
                lens.push(1);
            }
        }
        let mut sa_at_start = Vec::with_capacity(tags.len());
        let mut sa_at_end = Vec::with_capacity(tags.len());
        let mut l = Vec::with_capacity(2 * tags.len() + 1);
        l.push(0);
        let mut start = 0;
        for (rho, &len) in lens.iter().enumerate() {
            let end = start + len - 1;
            sa_at_start.push(sa.get(start));
            sa_at_end.push(sa.get(end));
            l.push(if len == 1 {
                dist[sa.get(start)]
            } else {
                lcp_min.min(start + 1, end)
            });
            if rho + 1 < lens.len() {
                l.push(lcp[end + 1]);
            }
            start = end + 1;
        }
        l.push(0);
        Self::from_parts(tags, lens, sa_at_start, sa_at_end, l).expect("consistent run arrays")
    }

    pub fn from_parts(
        tags: Vec<TagId>,
        lens: Vec<usize>,
        sa_at_start: Vec<usize>,
        sa_at_end: Vec<usize>,
        l: Vec<usize>,
    ) -> Result<Self> {
        let t = tags.len();
        if t == 0
            || lens.len() != t
            || sa_at_start.len() != t
            || sa_at_end.len() != t
            || l.len() != 2 * t + 1
        {
            return Err(Error::Format("tag run arrays disagree in length".into()));
        }
        if lens.contains(&0) || l[0] != 0 || l[2 * t] != 0 {
            return Err(Error::Format("malformed tag run arrays".into()));
        }
        let mut starts = Vec::with_capacity(t + 1);
        let mut acc = 0;
        starts.push(0);
        for &len in &lens {
            acc += len;
            starts.push(acc);
        }
        let l_tree = MinTree::new(&l.iter().map(|&v| v as u64).collect::<Vec<_>>());
        Ok(TagRunIndex {
            tags,
            lens,
            starts,
            sa_at_start,
            sa_at_end,
            l,
            l_tree,
        })
    }

    /// Number of runs, `t`.
    pub fn run_count(&self) -> usize {
        self.tags.len()
    }

    /// Run tags `A`.
    pub fn tags(&self) -> &[TagId] {
        &self.tags
    }

    /// Run lengths `R`.
    pub fn lens(&self) -> &[usize] {
        &self.lens
    }

    pub fn tag(&self, run: usize) -> TagId {
        self.tags[run]
    }

    pub fn len_of(&self, run: usize) -> usize {
        self.lens[run]
    }

    /// First row `U[run]`.
    pub fn start(&self, run: usize) -> usize {
        self.starts[run]
    }

    /// Last row `D[run]`.
    pub fn end(&self, run: usize) -> usize {
        self.starts[run + 1] - 1
    }

    pub fn sa_at_start(&self) -> &[usize] {
        &self.sa_at_start
    }

    pub fn sa_at_end(&self) -> &[usize] {
        &self.sa_at_end
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn w(&self, run: usize) -> usize {
        self.l[2 * run + 1]
    }

    pub fn b(&self, run: usize) -> usize {
        self.l[2 * run + 2]
    }

    pub fn run_of_rank(&self, rank: usize) -> usize {
        self.starts.partition_point(|&s| s <= rank) - 1
    }

    /// Largest `p <= hi` with `L[p] < threshold`.
    pub fn l_last_below(&self, hi: usize, threshold: usize, steps: &mut usize) -> Option<usize> {
        self.l_tree.last_below(hi, threshold as u64, steps)
    }

    /// Smallest `p >= lo` with `L[p] < threshold`.
    pub fn l_first_below(&self, lo: usize, threshold: usize, steps: &mut usize) -> Option<usize> {
        self.l_tree.first_below(lo, threshold as u64, steps)
    }

    /// Runs overlapped by the interval of the `width`-long prefix of the
    /// pattern suffix described by `ts`. `None` when that prefix does not
    /// occur. `steps` counts min-tree nodes visited.
    pub fn run_range(&self, ts: &TsEntry, width: usize, steps: &mut usize) -> Option<RunRange> {
        if width == 0 || ts.len < width {
            return None;
        }
        let q = ts.run;
        let (first, first_partial) = if ts.up < width {
            (q, true)
        } else {
            let p = self
                .l_last_below(2 * q, width, steps)
                .expect("L[0] = 0 bounds the search");
            (p / 2, p % 2 == 1)
        };
        let (last, last_partial) = if ts.down < width {
            (q, true)
        } else {
            let p = self
                .l_first_below(2 * q + 2, width, steps)
                .expect("L[2t] = 0 bounds the search");
            (p.div_ceil(2) - 1, p % 2 == 1)
        };
        Some(RunRange {
            first,
            last,
            first_partial,
            last_partial,
        })
    }

    /// Run range spanned by the L-range `[lo, hi]` (bounded by entries below
    /// the threshold at `lo - 1` and `hi + 1`).
    pub fn runs_of_l_range(&self, lo: usize, hi: usize) -> RunRange {
        let (pl, pr) = (lo - 1, hi + 1);
        RunRange {
            first: pl / 2,
            last: pr.div_ceil(2) - 1,
            first_partial: pl % 2 == 1,
            last_partial: pr % 2 == 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_lcp(text: &[u8], a: usize, b: usize) -> usize {
        text[a..]
            .iter()
            .zip(&text[b..])
            .take_while(|(x, y)| x == y && !crate::text::is_reserved(**x))
            .count()
    }

    fn random_instance(
        rng: &mut ChaCha8Rng,
        n: usize,
        tags: u32,
    ) -> (Vec<u8>, SuffixArray, Vec<TagId>) {
        let mut text: Vec<u8> = (0..n).map(|_| b"ACG$"[rng.gen_range(0..4)]).collect();
        text.push(0);
        let sa = SuffixArray::build(&text);
        let mut tag_array = Vec::new();
        while tag_array.len() < text.len() {
            let tag = rng.gen_range(0..tags);
            let len = rng.gen_range(1..5);
            tag_array.extend(std::iter::repeat_n(tag, len));
        }
        tag_array.truncate(text.len());
        (text, sa, tag_array)
    }

    #[test]
    fn single_run() {
        let text = b"ACCA\0";
        let sa = SuffixArray::build(text);
        let runs = TagRunIndex::build(&[3; 5], &sa, text);
        assert_eq!(runs.run_count(), 1);
        assert_eq!(runs.l(), &[0, 0, 0]);
        assert_eq!(runs.lens(), &[5]);
    }

    #[test]
    fn arrays_match_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = rng.gen_range(1..300);
            let (text, sa, tag_array) = random_instance(&mut rng, n, 3);
            let runs = TagRunIndex::build(&tag_array, &sa, &text);
            let t = runs.run_count();
            assert!(runs.tags().windows(2).all(|w| w[0] != w[1]));
            assert_eq!(runs.lens().iter().sum::<usize>(), text.len());
            assert_eq!(runs.l().len(), 2 * t + 1);
            for rho in 0..t {
                let (u, d) = (runs.start(rho), runs.end(rho));
                assert!(tag_array[u..=d].iter().all(|&x| x == runs.tag(rho)));
                assert_eq!(runs.sa_at_start()[rho], sa.get(u));
                assert_eq!(runs.sa_at_end()[rho], sa.get(d));
                // W both as a boundary-pair LCP and as a minimum of adjacent LCPs.
                assert_eq!(runs.w(rho), naive_lcp(&text, sa.get(u), sa.get(d)));
                let adjacent = (u + 1..=d)
                    .map(|q| naive_lcp(&text, sa.get(q - 1), sa.get(q)))
                    .min();
                if let Some(m) = adjacent {
                    assert_eq!(runs.w(rho), m);
                }
                if rho + 1 < t {
                    assert_eq!(runs.b(rho), naive_lcp(&text, sa.get(d), sa.get(d + 1)));
                }
                for q in u..=d {
                    assert_eq!(runs.run_of_rank(q), rho);
                }
            }
        }
    }

    #[test]
    fn l_navigation_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut trials = 0;
        while trials < 10_000 {
            let (text, sa, tag_array) = random_instance(&mut rng, 200, 4);
            let runs = TagRunIndex::build(&tag_array, &sa, &text);
            let l = runs.l();
            for _ in 0..1000 {
                let p = rng.gen_range(0..l.len());
                let thr = rng.gen_range(1..5);
                let mut steps = 0;
                let left = (0..=p).rev().find(|&x| l[x] < thr);
                let right = (p..l.len()).find(|&x| l[x] < thr);
                assert_eq!(runs.l_last_below(p, thr, &mut steps), left);
                assert_eq!(runs.l_first_below(p, thr, &mut steps), right);
                trials += 1;
            }
        }
    }

    #[test]
    fn contained_runs() {
        let r = RunRange {
            first: 2,
            last: 5,
            first_partial: true,
            last_partial: false,
        };
        assert_eq!(r.contained(), Some((3, 5)));
        let adjacent = RunRange {
            first: 2,
            last: 3,
            first_partial: true,
            last_partial: true,
        };
        assert_eq!(adjacent.contained(), None);
        let inside = RunRange {
            first: 0,
            last: 0,
            first_partial: true,
            last_partial: false,
        };
        assert_eq!(inside.contained(), None);
        let whole = RunRange {
            first: 0,
            last: 0,
            first_partial: false,
            last_partial: false,
        };
        assert_eq!(whole.contained(), Some((0, 0)));
    }
}
