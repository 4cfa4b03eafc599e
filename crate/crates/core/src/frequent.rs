//! Tags labeling at least `f` occurrences of a substring, for an `f` fixed
//! at build time.
//!
//! Every tag run contributes two entries (its first and its last suffix).
//! An entry stores its tag, the previous entry with the same tag, and the
//! longest prefix of its suffix that occurs at least `f` times labeled by
//! that tag. Over the entries of the runs a query overlaps, the first entry
//! of each tag answers for the tag, so one dominance query
//! `x in [u, v], prev < u, len >= width` reports each qualifying tag once.

use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::grid::{GridPoint, PointGrid};
use crate::rlbwt::Rlbwt;
use crate::rmq::SparseTable;
use crate::runs::{RunRange, TagRunIndex};
use crate::text::{searchable_lcp, searchable_lengths, SuffixArray, TagId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub tag: TagId,
    pub prev: Option<usize>,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct TripleIndex {
    f: usize,
    entries: Vec<Triple>,
    grid: PointGrid<(Reverse<usize>, usize)>,
}

impl TripleIndex {
    pub fn build(
        f: usize,
        runs: &TagRunIndex,
        tag_array: &[TagId],
        sa: &SuffixArray,
        text: &[u8],
    ) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidFrequency(f));
        }
        let lcp = searchable_lcp(text, sa);
        let dist = searchable_lengths(text);
        let lcp_min = SparseTable::new(lcp);
        let n = tag_array.len();
        let mut rows_by_tag: Vec<Vec<usize>> = Vec::new();
        for (q, &tag) in tag_array.iter().enumerate() {
            if rows_by_tag.len() <= tag as usize {
                rows_by_tag.resize(tag as usize + 1, Vec::new());
            }
            rows_by_tag[tag as usize].push(q);
        }

        // Rows sharing the first `width` characters with row q.
        let interval = |q: usize, width: usize| -> (usize, usize) {
            let (mut lo, mut hi) = (0, q);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if lcp_min.min(mid + 1, q) >= width {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let start = lo;
            let (mut lo, mut hi) = (q, n - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if lcp_min.min(q + 1, mid) >= width {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            (start, lo)
        };
        let frequent_len = |q: usize, tag: TagId| -> usize {
            let rows = &rows_by_tag[tag as usize];
            let labeled = |width: usize| {
                let (a, b) = interval(q, width);
                rows.partition_point(|&x| x <= b) - rows.partition_point(|&x| x < a)
            };
            let (mut lo, mut hi) = (0, dist[sa.get(q)]);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if labeled(mid) >= f {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        };

        let mut entries = Vec::with_capacity(2 * runs.run_count());
        let mut last_entry: Vec<Option<usize>> = vec![None; rows_by_tag.len()];
        for rho in 0..runs.run_count() {
            let tag = runs.tag(rho);
            for row in [runs.start(rho), runs.end(rho)] {
                let idx = entries.len();
                entries.push(Triple {
                    tag,
                    prev: last_entry[tag as usize],
                    len: frequent_len(row, tag),
                });
                last_entry[tag as usize] = Some(idx);
            }
        }
        Self::from_entries(f, entries)
    }

    pub fn from_entries(f: usize, entries: Vec<Triple>) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidFrequency(f));
        }
        if entries
            .iter()
            .enumerate()
            .any(|(k, e)| e.prev.is_some_and(|p| p >= k))
        {
            return Err(Error::Format(
                "triple pointer does not point backwards".into(),
            ));
        }
        let points: Vec<_> = entries
            .iter()
            .enumerate()
            .map(|(k, e)| GridPoint {
                x: k,
                y: e.prev.map_or(0, |p| p + 1),
                key: (Reverse(e.len), k),
            })
            .collect();
        Ok(TripleIndex {
            f,
            grid: PointGrid::new(entries.len(), &points),
            entries,
        })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn entries(&self) -> &[Triple] {
        &self.entries
    }

    /// Entries of the overlapped runs' boundary suffixes that lie inside the
    /// interval: a partial first run contributes only its end, a partial
    /// last run only its start. `None` for a single run.
    pub fn interval(range: &RunRange) -> Option<(usize, usize)> {
        if range.is_single() {
            return None;
        }
        let u = 2 * range.first + usize::from(range.first_partial);
        let v = 2 * range.last + usize::from(!range.last_partial);
        Some((u, v))
    }

    /// Entry indices `k in [u, v]` with `prev < u` and `len >= width`, in
    /// increasing order.
    pub fn dominating(&self, u: usize, v: usize, width: usize) -> Vec<usize> {
        let mut hits: Vec<usize> = self
            .grid
            .report(u, v, u + 1, |&(Reverse(len), _)| len >= width)
            .into_iter()
            .map(|(_, k)| k)
            .collect();
        hits.sort_unstable();
        hits
    }
}

/// `fms[i]` = longest prefix of `P[i..]` occurring at least `f` times in
/// the text; `fms[m] = 0`.
pub fn compute_fms(bwt: &Rlbwt, pattern: &[u8], f: usize) -> Vec<usize> {
    let m = pattern.len();
    let mut fms = vec![0; m + 1];
    let mut end = m;
    for i in (0..m).rev() {
        end = end.min(i + fms[i + 1] + 1);
        while end > i && !occurs_at_least(bwt, &pattern[i..end], f) {
            end -= 1;
        }
        fms[i] = end - i;
    }
    fms
}

fn occurs_at_least(bwt: &Rlbwt, pattern: &[u8], f: usize) -> bool {
    // Backward search that stops as soon as the interval is too narrow.
    let (mut sp, mut ep) = (0, bwt.len());
    for &c in pattern.iter().rev() {
        if !bwt.contains_char(c) {
            return false;
        }
        let s = bwt.c_of(c) + bwt.rank(c, sp);
        let e = bwt.c_of(c) + bwt.rank(c, ep);
        if e < s + f {
            return false;
        }
        sp = s;
        ep = e;
    }
    true
}
