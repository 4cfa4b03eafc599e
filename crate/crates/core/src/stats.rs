//! Extended matching statistics and tag statistics of a pattern, computed
//! in one right-to-left pass.

use crate::error::{Error, Result};
use crate::rlbwt::Rlbwt;
use crate::runs::TagRunIndex;
use crate::slp::{PatternHashes, Slp};
use crate::text::is_reserved;

/// Longest prefix of `P[i..]` occurring in the text, with one occurrence:
/// text position `pos` and suffix-array row `rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XmsEntry {
    pub len: usize,
    pub pos: usize,
    pub rank: usize,
}

/// An [`XmsEntry`] plus the tag run holding `rank` and the LCPs of `P[i..]`
/// with the first (`up`) and last (`down`) suffix of that run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsEntry {
    pub len: usize,
    pub pos: usize,
    pub rank: usize,
    pub run: usize,
    pub up: usize,
    pub down: usize,
}

/// Maximal exact match `P[start..start + len)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mem {
    pub start: usize,
    pub len: usize,
}

pub fn check_pattern(pattern: &[u8]) -> Result<()> {
    match pattern.iter().position(|&b| is_reserved(b)) {
        Some(offset) => Err(Error::ReservedPatternByte {
            offset,
            byte: pattern[offset],
        }),
        None => Ok(()),
    }
}

/// `m + 1` entries; the last is the empty match at the terminator suffix.
pub fn compute_xms(
    bwt: &Rlbwt,
    slp: &Slp,
    pattern: &[u8],
    hashes: &PatternHashes,
) -> Result<Vec<XmsEntry>> {
    check_pattern(pattern)?;
    let m = pattern.len();
    let end = XmsEntry {
        len: 0,
        pos: bwt.len() - 1,
        rank: 0,
    };
    let mut xms = vec![end; m + 1];
    for i in (0..m).rev() {
        let c = pattern[i];
        let next = xms[i + 1];
        if !bwt.contains_char(c) {
            xms[i] = end;
            continue;
        }
        if bwt.char_at(next.rank)? == c {
            xms[i] = XmsEntry {
                len: next.len + 1,
                pos: next.pos - 1,
                rank: bwt.lf(next.rank)?,
            };
            continue;
        }
        let (up, down) = bwt.run_boundary_pred_succ(next.rank, c);
        let mut best: Option<(usize, crate::rlbwt::SampledPosition)> = None;
        for cand in [up, down].into_iter().flatten() {
            let l = slp.lcp(hashes, i + 1, i + 1 + next.len, cand.sa)?;
            if best.is_none_or(|(bl, _)| l > bl) {
                best = Some((l, cand));
            }
        }
        let (l, cand) = best.expect("c occurs in the BWT");
        debug_assert!(l < m - i);
        xms[i] = XmsEntry {
            len: l + 1,
            pos: cand.sa - 1,
            rank: bwt.lf(cand.pos)?,
        };
    }
    Ok(xms)
}

pub fn compute_tag_statistics(
    xms: &[XmsEntry],
    runs: &TagRunIndex,
    slp: &Slp,
    hashes: &PatternHashes,
) -> Result<Vec<TsEntry>> {
    let m = hashes.len();
    xms.iter()
        .enumerate()
        .map(|(i, x)| {
            let run = runs.run_of_rank(x.rank);
            Ok(TsEntry {
                len: x.len,
                pos: x.pos,
                rank: x.rank,
                run,
                up: slp.lcp(hashes, i, m, runs.sa_at_start()[run])?,
                down: slp.lcp(hashes, i, m, runs.sa_at_end()[run])?,
            })
        })
        .collect()
}

/// Matches not contained in the match starting one position earlier.
pub fn find_mems(xms: &[XmsEntry]) -> Vec<Mem> {
    let m = xms.len().saturating_sub(1);
    (0..m)
        .filter(|&i| xms[i].len > 0 && (i == 0 || xms[i - 1].len <= xms[i].len))
        .map(|i| Mem {
            start: i,
            len: xms[i].len,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{SuffixArray, TagArray, TaggedText};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    struct Fixture {
        text: Vec<u8>,
        bwt: Rlbwt,
        slp: Slp,
        runs: TagRunIndex,
        sa: SuffixArray,
    }

    fn fixture(rng: &mut ChaCha8Rng, n: usize) -> Fixture {
        let seq: Vec<u8> = (0..n).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        let ann: Vec<String> = (0..n).map(|_| rng.gen_range(0..3).to_string()).collect();
        let tt = TaggedText::from_sequences(&[seq], &[ann]).unwrap();
        let sa = SuffixArray::build(tt.text());
        let tags = TagArray::build(&tt, &sa);
        Fixture {
            text: tt.text().to_vec(),
            bwt: Rlbwt::build(tt.text(), &sa),
            slp: Slp::build(tt.text(), crate::slp::random_base(rng)),
            runs: TagRunIndex::build(tags.as_slice(), &sa, tt.text()),
            sa,
        }
    }

    fn lcp(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).take_while(|(x, y)| x == y).count()
    }

    #[test]
    fn single_character() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let f = fixture(&mut rng, 50);
        let c = f.text[0];
        let ph = PatternHashes::new(&[c], f.slp.base());
        let xms = compute_xms(&f.bwt, &f.slp, &[c], &ph).unwrap();
        assert_eq!(xms[0].len, 1);
        assert_eq!(f.text[xms[0].pos], c);
        let (s, e) = f.bwt.backward_search(&[c]).unwrap();
        assert!((s..=e).contains(&xms[0].rank));
    }

    #[test]
    fn reserved_bytes_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let f = fixture(&mut rng, 20);
        let ph = PatternHashes::new(b"A$C", f.slp.base());
        assert!(matches!(
            compute_xms(&f.bwt, &f.slp, b"A$C", &ph),
            Err(Error::ReservedPatternByte { offset: 1, .. })
        ));
    }

    #[test]
    fn absent_character_resets() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let f = fixture(&mut rng, 40);
        let p = b"ANC";
        let ph = PatternHashes::new(p, f.slp.base());
        let xms = compute_xms(&f.bwt, &f.slp, p, &ph).unwrap();
        assert_eq!(
            xms[1],
            XmsEntry {
                len: 0,
                pos: f.text.len() - 1,
                rank: 0
            }
        );
        assert_eq!(xms[0].len, 1);
        assert!(find_mems(&xms).iter().all(|mem| mem.len > 0));
    }

    #[test]
    fn xms_and_ts_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..40 {
            let n = rng.gen_range(1..200);
            let f = fixture(&mut rng, n);
            let m = rng.gen_range(0..30);
            let p: Vec<u8> = (0..m).map(|_| b"ACGTN"[rng.gen_range(0..5)]).collect();
            let ph = PatternHashes::new(&p, f.slp.base());
            let xms = compute_xms(&f.bwt, &f.slp, &p, &ph).unwrap();
            let ts = compute_tag_statistics(&xms, &f.runs, &f.slp, &ph).unwrap();
            for i in 0..=m {
                let best = (0..f.text.len())
                    .map(|q| lcp(&p[i..], &f.text[q..]))
                    .max()
                    .unwrap();
                let x = xms[i];
                assert_eq!(x.len, best);
                assert_eq!(&f.text[x.pos..x.pos + x.len], &p[i..i + x.len]);
                assert_eq!(f.sa.get(x.rank), x.pos);
                let t = ts[i];
                assert_eq!((t.len, t.pos, t.rank), (x.len, x.pos, x.rank));
                assert!(f.runs.start(t.run) <= t.rank && t.rank <= f.runs.end(t.run));
                let u = f.sa.get(f.runs.start(t.run));
                let d = f.sa.get(f.runs.end(t.run));
                assert_eq!(t.up, lcp(&p[i..], &f.text[u..]));
                assert_eq!(t.down, lcp(&p[i..], &f.text[d..]));
            }
            for i in 1..=m {
                assert!(xms[i - 1].len <= xms[i].len + 1);
            }
        }
    }

    #[test]
    fn mems_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..40 {
            let f = fixture(&mut rng, 150);
            let m = rng.gen_range(1..40);
            let p: Vec<u8> = (0..m).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
            let ph = PatternHashes::new(&p, f.slp.base());
            let xms = compute_xms(&f.bwt, &f.slp, &p, &ph).unwrap();
            let occurs = |a: usize, b: usize| f.text.windows(b - a).any(|w| w == &p[a..b]);
            let mut expect = Vec::new();
            for a in 0..m {
                for b in a + 1..=m {
                    let left_ok = a == 0 || !occurs(a - 1, b);
                    let right_ok = b == m || !occurs(a, b + 1);
                    if occurs(a, b) && left_ok && right_ok {
                        expect.push(Mem {
                            start: a,
                            len: b - a,
                        });
                    }
                }
            }
            assert_eq!(find_mems(&xms), expect);
        }
        // A pattern occurring in full is a single MEM.
        let f = fixture(&mut rng, 100);
        let p = f.text[10..30].to_vec();
        let ph = PatternHashes::new(&p, f.slp.base());
        let xms = compute_xms(&f.bwt, &f.slp, &p, &ph).unwrap();
        assert_eq!(find_mems(&xms), vec![Mem { start: 0, len: 20 }]);
    }
}
