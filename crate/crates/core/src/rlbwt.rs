//! Run-length encoded BWT with LF-mapping, backward search and suffix-array
//! samples at every run boundary.

use crate::error::{Error, Result};
use crate::text::SuffixArray;

/// A BWT position whose suffix-array value is sampled (a run head or tail).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampledPosition {
    pub pos: usize,
    pub sa: usize,
}

#[derive(Debug, Clone)]
pub struct Rlbwt {
    len: usize,
    run_chars: Vec<u8>,
    /// Start of each run, followed by `len`.
    run_starts: Vec<usize>,
    /// Occurrences of the run's character strictly before the run.
    rank_before: Vec<usize>,
    /// `c_table[c]` = number of BWT characters smaller than `c`.
    c_table: Vec<usize>,
    /// Indices of the runs of each character, in BWT order.
    char_runs: Vec<Vec<usize>>,
    head_sa: Vec<usize>,
    tail_sa: Vec<usize>,
}

impl Rlbwt {
    pub fn build(text: &[u8], sa: &SuffixArray) -> Self {
        let n = text.len();
        let mut runs: Vec<(u8, usize)> = Vec::new();
        let mut head_sa = Vec::new();
        let mut tail_sa = Vec::new();
        for q in 0..n {
            let p = sa.get(q);
            let c = if p == 0 { text[n - 1] } else { text[p - 1] };
            match runs.last_mut() {
                Some((rc, len)) if *rc == c => {
                    *len += 1;
                    *tail_sa.last_mut().unwrap() = p;
                }
                _ => {
                    runs.push((c, 1));
                    head_sa.push(p);
                    tail_sa.push(p);
                }
            }
        }
        Self::from_parts(&runs, head_sa, tail_sa)
    }

    /// Rebuilds the rank directories from the run list and the boundary samples.
    pub fn from_parts(runs: &[(u8, usize)], head_sa: Vec<usize>, tail_sa: Vec<usize>) -> Self {
        let mut run_chars = Vec::with_capacity(runs.len());
        let mut run_starts = Vec::with_capacity(runs.len() + 1);
        let mut rank_before = Vec::with_capacity(runs.len());
        let mut counts = vec![0usize; 256];
        let mut char_runs = vec![Vec::new(); 256];
        let mut pos = 0;
        for (idx, &(c, len)) in runs.iter().enumerate() {
            run_chars.push(c);
            run_starts.push(pos);
            rank_before.push(counts[c as usize]);
            char_runs[c as usize].push(idx);
            counts[c as usize] += len;
            pos += len;
        }
        run_starts.push(pos);
        let mut c_table = vec![0usize; 257];
        for c in 0..256 {
            c_table[c + 1] = c_table[c] + counts[c];
        }
        Rlbwt {
            len: pos,
            run_chars,
            run_starts,
            rank_before,
            c_table,
            char_runs,
            head_sa,
            tail_sa,
        }
    }

    /// Number of BWT positions (`n + 1`).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of runs, `r`.
    pub fn run_count(&self) -> usize {
        self.run_chars.len()
    }

    pub fn runs(&self) -> impl Iterator<Item = (u8, usize)> + '_ {
        self.run_chars
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, self.run_starts[i + 1] - self.run_starts[i]))
    }

    pub fn head_samples(&self) -> &[usize] {
        &self.head_sa
    }

    pub fn tail_samples(&self) -> &[usize] {
        &self.tail_sa
    }

    fn run_of(&self, q: usize) -> usize {
        self.run_starts.partition_point(|&s| s <= q) - 1
    }

    pub fn contains_char(&self, c: u8) -> bool {
        self.c_table[c as usize + 1] > self.c_table[c as usize]
    }

    pub fn char_at(&self, q: usize) -> Result<u8> {
        if q >= self.len {
            return Err(Error::OutOfRange {
                pos: q,
                len: self.len,
            });
        }
        Ok(self.run_chars[self.run_of(q)])
    }

    /// LF-mapping: `SA[lf(q)] = SA[q] - 1 (mod n + 1)`.
    pub fn lf(&self, q: usize) -> Result<usize> {
        if q >= self.len {
            return Err(Error::OutOfRange {
                pos: q,
                len: self.len,
            });
        }
        let run = self.run_of(q);
        let c = self.run_chars[run] as usize;
        Ok(self.c_table[c] + self.rank_before[run] + (q - self.run_starts[run]))
    }

    /// Number of BWT characters smaller than `c`.
    pub fn c_of(&self, c: u8) -> usize {
        self.c_table[c as usize]
    }

    /// Occurrences of `c` in `BWT[0..q)`.
    pub fn rank(&self, c: u8, q: usize) -> usize {
        let list = &self.char_runs[c as usize];
        let k = list.partition_point(|&run| self.run_starts[run] < q);
        if k == 0 {
            return 0;
        }
        let run = list[k - 1];
        let start = self.run_starts[run];
        let len = self.run_starts[run + 1] - start;
        self.rank_before[run] + len.min(q - start)
    }

    /// Inclusive SA interval of suffixes prefixed by `pattern`.
    pub fn backward_search(&self, pattern: &[u8]) -> Option<(usize, usize)> {
        let (mut sp, mut ep) = (0, self.len);
        for &c in pattern.iter().rev() {
            sp = self.c_table[c as usize] + self.rank(c, sp);
            ep = self.c_table[c as usize] + self.rank(c, ep);
            if sp >= ep {
                return None;
            }
        }
        Some((sp, ep - 1))
    }

    /// Nearest occurrences of `c` strictly above and below BWT position `q`.
    /// The one above is a run tail and the one below a run head, so both
    /// come with their SA sample.
    pub fn run_boundary_pred_succ(
        &self,
        q: usize,
        c: u8,
    ) -> (Option<SampledPosition>, Option<SampledPosition>) {
        let list = &self.char_runs[c as usize];
        let k = list.partition_point(|&run| self.run_starts[run] <= q);
        let up = (k > 0).then(|| {
            let run = list[k - 1];
            debug_assert!(self.run_starts[run + 1] <= q, "BWT[q] must differ from c");
            SampledPosition {
                pos: self.run_starts[run + 1] - 1,
                sa: self.tail_sa[run],
            }
        });
        let down = list.get(k).map(|&run| SampledPosition {
            pos: self.run_starts[run],
            sa: self.head_sa[run],
        });
        (up, down)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_text(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
        let mut t: Vec<u8> = (0..n).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        t.push(0);
        t
    }

    #[test]
    fn tiny_text() {
        let text = b"A\0";
        let sa = SuffixArray::build(text);
        let bwt = Rlbwt::build(text, &sa);
        assert_eq!(bwt.len(), 2);
        assert_eq!(bwt.char_at(0).unwrap(), b'A');
        assert_eq!(bwt.char_at(1).unwrap(), 0);
        assert_eq!(bwt.run_count(), 2);
        assert!(bwt.lf(2).is_err());
    }

    #[test]
    fn bwt_definition_and_lf_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 2, 10, 500] {
            let text = random_text(&mut rng, n);
            let sa = SuffixArray::build(&text);
            let bwt = Rlbwt::build(&text, &sa);
            let len = text.len();
            for q in 0..len {
                let p = sa.get(q);
                let expect = text[(p + len - 1) % len];
                assert_eq!(bwt.char_at(q).unwrap(), expect);
                let lf = bwt.lf(q).unwrap();
                assert_eq!(sa.get(lf), (p + len - 1) % len);
            }
            // q = 0 is the terminator suffix; its LF lands on the last character.
            assert_eq!(sa.get(bwt.lf(0).unwrap()), len - 2);
            // Adjacent runs differ, lengths sum up.
            let runs: Vec<_> = bwt.runs().collect();
            assert!(runs.windows(2).all(|w| w[0].0 != w[1].0));
            assert_eq!(runs.iter().map(|r| r.1).sum::<usize>(), len);
            // Samples at run heads and tails.
            let mut start = 0;
            for (i, &(_, l)) in runs.iter().enumerate() {
                assert_eq!(bwt.head_samples()[i], sa.get(start));
                assert_eq!(bwt.tail_samples()[i], sa.get(start + l - 1));
                start += l;
            }
        }
    }

    #[test]
    fn inverting_by_lf_recovers_text() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let text = random_text(&mut rng, 500);
        let sa = SuffixArray::build(&text);
        let bwt = Rlbwt::build(&text, &sa);
        // Row 0 is the terminator suffix; walking LF spells T backwards.
        let mut q = 0;
        let mut out = Vec::new();
        for _ in 0..text.len() {
            out.push(bwt.char_at(q).unwrap());
            q = bwt.lf(q).unwrap();
        }
        assert_eq!(q, 0);
        out.reverse();
        let mut rotated = vec![0u8];
        rotated.extend_from_slice(&text[..text.len() - 1]);
        assert_eq!(out, rotated);
    }

    #[test]
    fn backward_search_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let text = random_text(&mut rng, 400);
        let sa = SuffixArray::build(&text);
        let bwt = Rlbwt::build(&text, &sa);
        for _ in 0..500 {
            let m = rng.gen_range(1..=8);
            let p: Vec<u8> = (0..m).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
            let hits: Vec<usize> = (0..text.len())
                .filter(|&q| text[sa.get(q)..].starts_with(&p))
                .collect();
            let expect = hits.first().map(|&s| (s, *hits.last().unwrap()));
            assert_eq!(bwt.backward_search(&p), expect);
            if let Some((s, e)) = expect {
                assert_eq!(e - s + 1, hits.len());
            }
        }
        assert_eq!(bwt.backward_search(b"N"), None);
    }

    #[test]
    fn pred_succ_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let text = random_text(&mut rng, 300);
        let sa = SuffixArray::build(&text);
        let bwt = Rlbwt::build(&text, &sa);
        let chars: Vec<u8> = (0..text.len()).map(|q| bwt.char_at(q).unwrap()).collect();
        for q in 0..text.len() {
            for &c in b"ACGT" {
                if chars[q] == c {
                    continue;
                }
                let (up, down) = bwt.run_boundary_pred_succ(q, c);
                let up_scan = (0..q).rev().find(|&x| chars[x] == c);
                let down_scan = (q + 1..text.len()).find(|&x| chars[x] == c);
                assert_eq!(up.map(|s| s.pos), up_scan);
                assert_eq!(down.map(|s| s.pos), down_scan);
                if let Some(s) = up {
                    assert_eq!(s.sa, sa.get(s.pos));
                    assert!(s.pos + 1 == text.len() || chars[s.pos + 1] != c);
                }
                if let Some(s) = down {
                    assert_eq!(s.sa, sa.get(s.pos));
                    assert!(chars[s.pos - 1] != c);
                }
            }
        }
        assert_eq!(bwt.run_boundary_pred_succ(3, b'N'), (None, None));
    }
}
