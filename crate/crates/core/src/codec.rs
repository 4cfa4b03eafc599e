//! Binary index format.
//!
//! Little-endian header (`WMAP`, format version, then `n r t g f base` and
//! the dictionary size as `u64`), followed by length-prefixed, LEB128-coded
//! sections: BWT runs and boundary samples, grammar rules with their
//! fingerprints, tag-run arrays, triples, and tag payloads. Everything
//! else is rebuilt on load. Saving is deterministic.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::frequent::{Triple, TripleIndex};
use crate::map::WheelerMap;
use crate::rlbwt::Rlbwt;
use crate::runs::TagRunIndex;
use crate::slp::{Rule, Slp};
use crate::text::TagDict;

pub const MAGIC: &[u8; 4] = b"WMAP";
pub const FORMAT_VERSION: u32 = 1;

pub fn to_bytes(map: &WheelerMap) -> Vec<u8> {
    let mut w = Vec::new();
    let stats = map.stats();
    let slp = map.slp();
    w.extend_from_slice(MAGIC);
    w.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for v in [stats.n, stats.r, stats.t, stats.g, stats.f] {
        w.extend_from_slice(&(v as u64).to_le_bytes());
    }
    w.extend_from_slice(&slp.base().to_le_bytes());
    w.extend_from_slice(&(map.dict().len() as u64).to_le_bytes());
    let mut out = w;

    let mut w = Vec::new();
    let bwt = map.bwt();
    for (c, len) in bwt.runs() {
        w.push(c);
        put(&mut w, len);
    }
    for &s in bwt.head_samples().iter().chain(bwt.tail_samples()) {
        put(&mut w, s);
    }
    section(&mut out, &mut w);

    put(&mut w, slp.root() as usize);
    for rule in slp.rules() {
        match *rule {
            Rule::Terminal(c) => {
                w.push(0);
                w.push(c);
            }
            Rule::Pair(l, r) => {
                w.push(1);
                put(&mut w, l as usize);
                put(&mut w, r as usize);
            }
        }
    }
    for sym in 0..slp.rule_count() {
        w.extend_from_slice(&slp.fingerprint(sym as u32).hash.to_le_bytes());
    }
    section(&mut out, &mut w);

    let runs = map.runs();
    for (&tag, &len) in runs.tags().iter().zip(runs.lens()) {
        put(&mut w, tag as usize);
        put(&mut w, len);
    }
    for &v in runs
        .sa_at_start()
        .iter()
        .chain(runs.sa_at_end())
        .chain(runs.l())
    {
        put(&mut w, v);
    }
    section(&mut out, &mut w);

    for e in map.triples().entries() {
        put(&mut w, e.tag as usize);
        put(&mut w, e.prev.map_or(0, |p| p + 1));
        put(&mut w, e.len);
    }
    section(&mut out, &mut w);

    for payload in map.dict().payloads() {
        put(&mut w, payload.len());
        w.extend_from_slice(payload.as_bytes());
    }
    section(&mut out, &mut w);
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<WheelerMap> {
    let mut next = Reader { rest: bytes };
    if next.take(4)? != MAGIC {
        return Err(Error::Format("missing WMAP signature".into()));
    }
    let version = u32::from_le_bytes(next.take(4)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let n = next.u64_usize()?;
    let run_count = next.u64_usize()?;
    let t = next.u64_usize()?;
    let g = next.u64_usize()?;
    let f = next.u64_usize()?;
    let base = next.u64()?;
    let dict_len = next.u64_usize()?;
    for count in [run_count, t, g, dict_len] {
        next.plausible(count)?;
    }

    let mut r = next.section()?;
    let mut bwt_runs = Vec::with_capacity(run_count);
    for _ in 0..run_count {
        let c = r.take(1)?[0];
        let len = r.varint()?;
        if len == 0 {
            return Err(Error::Format("empty BWT run".into()));
        }
        bwt_runs.push((c, len));
    }
    if bwt_runs
        .iter()
        .try_fold(0usize, |acc, &(_, len)| acc.checked_add(len))
        != Some(n)
    {
        return Err(Error::Format("BWT runs do not sum to n".into()));
    }
    let head = r.varints(run_count)?;
    let tail = r.varints(run_count)?;
    if head.iter().chain(&tail).any(|&s| s >= n) {
        return Err(Error::Format("suffix-array sample out of range".into()));
    }
    let bwt = Rlbwt::from_parts(&bwt_runs, head, tail);

    r.finish()?;
    let mut r = next.section()?;
    let root = r.varint()?;
    let mut rules = Vec::with_capacity(g);
    for _ in 0..g {
        let rule = match r.take(1)?[0] {
            0 => Rule::Terminal(r.take(1)?[0]),
            1 => Rule::Pair(r.symbol()?, r.symbol()?),
            kind => return Err(Error::Format(format!("unknown rule kind {kind}"))),
        };
        rules.push(rule);
    }
    let root =
        u32::try_from(root).map_err(|_| Error::Format("grammar root out of range".into()))?;
    let slp = Slp::from_rules(rules, root, base)?;
    for sym in 0..g {
        if r.u64()? != slp.fingerprint(sym as u32).hash {
            return Err(Error::Format(format!("fingerprint mismatch at rule {sym}")));
        }
    }

    r.finish()?;
    let mut r = next.section()?;
    let mut tags = Vec::with_capacity(t);
    let mut lens = Vec::with_capacity(t);
    for _ in 0..t {
        tags.push(r.symbol()?);
        lens.push(r.varint()?);
    }
    let sa_at_start = r.varints(t)?;
    let sa_at_end = r.varints(t)?;
    let l = r.varints(2 * t + 1)?;
    let runs = TagRunIndex::from_parts(tags, lens, sa_at_start, sa_at_end, l)?;

    r.finish()?;
    let mut r = next.section()?;
    let mut entries = Vec::with_capacity(2 * t);
    for _ in 0..2 * t {
        let tag = r.symbol()?;
        let prev = r.varint()?.checked_sub(1);
        let len = r.varint()?;
        if tag as usize >= dict_len {
            return Err(Error::Format("triple tag outside the dictionary".into()));
        }
        entries.push(Triple { tag, prev, len });
    }
    let triples = TripleIndex::from_entries(f, entries)?;

    r.finish()?;
    let mut r = next.section()?;
    let mut payloads = Vec::with_capacity(dict_len);
    for _ in 0..dict_len {
        let len = r.varint()?;
        let bytes = r.take(len)?;
        let payload = std::str::from_utf8(bytes)
            .map_err(|_| Error::Format("tag payload is not UTF-8".into()))?;
        payloads.push(payload.to_owned());
    }
    r.finish()?;
    next.finish()?;
    WheelerMap::from_parts(TagDict::from_payloads(payloads)?, bwt, slp, runs, triples)
}

pub fn write_to<W: Write>(map: &WheelerMap, mut out: W) -> Result<()> {
    out.write_all(&to_bytes(map))?;
    Ok(())
}

pub fn read_from<R: Read>(mut input: R) -> Result<WheelerMap> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn save(map: &WheelerMap, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_bytes(map))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<WheelerMap> {
    from_bytes(&fs::read(path)?)
}

/// Appends `body` with its byte length and clears it.
fn section(out: &mut Vec<u8>, body: &mut Vec<u8>) {
    out.extend_from_slice(&(body.len() as u64).to_le_bytes());
    out.append(body);
}

fn put(w: &mut Vec<u8>, v: usize) {
    leb128::write::unsigned(w, v as u64).expect("writing to a Vec");
}

struct Reader<'a> {
    rest: &'a [u8],
}

fn truncated() -> Error {
    Error::Format("truncated file".into())
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.rest.len() < len {
            return Err(truncated());
        }
        let (head, tail) = self.rest.split_at(len);
        self.rest = tail;
        Ok(head)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u64_usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?)
            .map_err(|_| Error::Format("size exceeds the address space".into()))
    }

    fn varint(&mut self) -> Result<usize> {
        let v = leb128::read::unsigned(&mut self.rest).map_err(|e| match e {
            leb128::read::Error::IoError(e) if e.kind() == io::ErrorKind::UnexpectedEof => {
                truncated()
            }
            e => Error::Format(format!("bad varint: {e}")),
        })?;
        usize::try_from(v).map_err(|_| Error::Format("varint exceeds the address space".into()))
    }

    fn varints(&mut self, count: usize) -> Result<Vec<usize>> {
        self.plausible(count)?;
        (0..count).map(|_| self.varint()).collect()
    }

    fn symbol(&mut self) -> Result<u32> {
        u32::try_from(self.varint()?)
            .map_err(|_| Error::Format("identifier exceeds 32 bits".into()))
    }

    fn section(&mut self) -> Result<Reader<'a>> {
        let len = self.u64_usize()?;
        Ok(Reader {
            rest: self.take(len)?,
        })
    }

    fn finish(&self) -> Result<()> {
        if !self.rest.is_empty() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(())
    }

    /// Every counted item takes at least one byte.
    fn plausible(&self, count: usize) -> Result<()> {
        if count > self.rest.len() {
            return Err(truncated());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::BuildOptions;
    use crate::text::TaggedText;

    fn small_map(seed: u64) -> WheelerMap {
        let seqs = ["GATTACA", "GATTAGA", "CATTAGA"];
        let anns: Vec<Vec<String>> = seqs
            .iter()
            .enumerate()
            .map(|(s, seq)| {
                (0..seq.len())
                    .map(|k| format!("t{}", (s + k / 3) % 4))
                    .collect()
            })
            .collect();
        let tt = TaggedText::from_sequences(&seqs, &anns).unwrap();
        WheelerMap::build(&tt, &BuildOptions { f: 2, seed }).unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let map = small_map(1);
        let bytes = to_bytes(&map);
        let again = from_bytes(&bytes).unwrap();
        assert_eq!(to_bytes(&again), bytes);
        assert_eq!(again.stats(), map.stats());
    }

    #[test]
    fn same_seed_same_bytes() {
        assert_eq!(to_bytes(&small_map(7)), to_bytes(&small_map(7)));
    }

    #[test]
    fn wrong_version_rejected() {
        let mut bytes = to_bytes(&small_map(1));
        bytes[4..8].copy_from_slice(&99u32.to_le_bytes());
        assert!(matches!(
            from_bytes(&bytes),
            Err(Error::Version {
                found: 99,
                expected: FORMAT_VERSION
            })
        ));
    }

    #[test]
    fn bad_magic_and_truncation_rejected() {
        let bytes = to_bytes(&small_map(1));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(from_bytes(&bad), Err(Error::Format(_))));
        for cut in [0, 3, 10, 60, bytes.len() / 2, bytes.len() - 1] {
            assert!(from_bytes(&bytes[..cut]).is_err(), "cut at {cut}");
        }
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(from_bytes(&longer).is_err());
    }

    #[test]
    fn corrupted_fingerprint_rejected() {
        let map = small_map(1);
        let mut bytes = to_bytes(&map);
        // Flip a bit in the base; every stored fingerprint then disagrees.
        bytes[48] ^= 1;
        assert!(from_bytes(&bytes).is_err());
    }
}
