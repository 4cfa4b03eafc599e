//! Slow reference answers computed straight from the text, for testing.
//! Texts are limited to [`ORACLE_MAX_LEN`] characters.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::runs::RunRange;
use crate::text::{is_reserved, TagId, TaggedText};

pub const ORACLE_MAX_LEN: usize = 20_000;

pub struct Oracle {
    text: Vec<u8>,
    tags: Vec<TagId>,
    /// Suffix order by plain byte comparison.
    sa: Vec<usize>,
}

impl Oracle {
    pub fn new(tt: &TaggedText) -> Result<Self> {
        if tt.len() > ORACLE_MAX_LEN {
            return Err(Error::OutOfRange {
                pos: tt.len(),
                len: ORACLE_MAX_LEN,
            });
        }
        let text = tt.text().to_vec();
        let mut sa: Vec<usize> = (0..text.len()).collect();
        sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
        Ok(Oracle {
            tags: tt.tags().to_vec(),
            text,
            sa,
        })
    }

    pub fn sa(&self) -> &[usize] {
        &self.sa
    }

    /// Tag of every suffix, in suffix order.
    pub fn tag_array(&self) -> Vec<TagId> {
        self.sa.iter().map(|&p| self.tags[p]).collect()
    }

    /// Suffix-array rows prefixed by `p`, inclusive; `None` if `p` is empty
    /// or absent.
    pub fn sa_interval(&self, p: &[u8]) -> Option<(usize, usize)> {
        if p.is_empty() {
            return None;
        }
        let prefix = |q: usize| {
            let s = &self.text[self.sa[q]..];
            &s[..s.len().min(p.len())]
        };
        let lo = self.sa.partition_point(|&x| {
            let s = &self.text[x..];
            &s[..s.len().min(p.len())] < p
        });
        let hi = self.sa.partition_point(|&x| {
            let s = &self.text[x..];
            &s[..s.len().min(p.len())] <= p
        });
        (lo < hi && prefix(lo) == p).then(|| (lo, hi - 1))
    }

    /// `(tag, occurrences)` for each tag labeling an occurrence of `p`,
    /// ordered by first occurrence in suffix order.
    pub fn tag_counts(&self, p: &[u8]) -> Option<Vec<(TagId, usize)>> {
        let (lo, hi) = self.sa_interval(p)?;
        let mut order = Vec::new();
        let mut counts: HashMap<TagId, usize> = HashMap::new();
        for &pos in &self.sa[lo..=hi] {
            let tag = self.tags[pos];
            let c = counts.entry(tag).or_insert(0);
            if *c == 0 {
                order.push(tag);
            }
            *c += 1;
        }
        Some(order.into_iter().map(|tag| (tag, counts[&tag])).collect())
    }

    pub fn distinct(&self, p: &[u8]) -> Option<Vec<TagId>> {
        Some(
            self.tag_counts(p)?
                .into_iter()
                .map(|(tag, _)| tag)
                .collect(),
        )
    }

    pub fn count(&self, p: &[u8]) -> Option<usize> {
        Some(self.tag_counts(p)?.len())
    }

    /// Every tag with its count, by count descending then tag ascending.
    pub fn ranked(&self, p: &[u8]) -> Option<Vec<(TagId, usize)>> {
        let mut all = self.tag_counts(p)?;
        all.sort_by_key(|&(tag, c)| (std::cmp::Reverse(c), tag));
        Some(all)
    }

    /// Tags with at least `f` occurrences, ordered by first occurrence.
    pub fn frequent(&self, p: &[u8], f: usize) -> Option<Vec<TagId>> {
        Some(
            self.tag_counts(p)?
                .into_iter()
                .filter(|&(_, c)| c >= f)
                .map(|(tag, _)| tag)
                .collect(),
        )
    }

    /// Tag-run range overlapped by the occurrences of `p`.
    pub fn run_range(&self, p: &[u8]) -> Option<RunRange> {
        let (lo, hi) = self.sa_interval(p)?;
        let tags = self.tag_array();
        let mut run = vec![0; tags.len()];
        let mut starts = vec![0];
        for q in 1..tags.len() {
            run[q] = run[q - 1];
            if tags[q] != tags[q - 1] {
                run[q] += 1;
                starts.push(q);
            }
        }
        starts.push(tags.len());
        let (first, last) = (run[lo], run[hi]);
        Some(RunRange {
            first,
            last,
            first_partial: starts[first] < lo,
            last_partial: starts[last + 1] - 1 > hi,
        })
    }

    /// Common prefix of `p` and the suffix at `q`, stopping at reserved bytes.
    pub fn lcp(&self, p: &[u8], q: usize) -> usize {
        p.iter()
            .zip(&self.text[q..])
            .take_while(|(a, b)| a == b && !is_reserved(**b))
            .count()
    }

    /// Longest prefix of each suffix of `p` that occurs in the text.
    pub fn matching_lengths(&self, p: &[u8]) -> Vec<usize> {
        (0..p.len())
            .map(|i| {
                (0..self.text.len())
                    .map(|q| self.lcp(&p[i..], q))
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }
}
