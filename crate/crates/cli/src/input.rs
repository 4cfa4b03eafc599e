//! Input formats for `wmap build`.
//!
//! Plain: one sequence per line, plus a tag TSV with one `position<TAB>payload`
//! line per text position. Positions are 1-based over the sequences joined
//! by `$`; position `len + 1` (the terminator) is optional.
//!
//! Records: `>`-headed records whose sequence may span lines, plus one tag
//! line per record holding whitespace-separated payloads, one per character
//! and optionally one more for the closing separator.

use anyhow::{bail, Context, Result};
use wheelermap::text::{TaggedText, SEPARATOR};

fn lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end_matches('\r')))
}

pub fn plain(text: &str, tags: &str) -> Result<TaggedText> {
    let seqs: Vec<&str> = lines(text)
        .map(|(_, l)| l)
        .filter(|l| !l.is_empty())
        .collect();
    if seqs.is_empty() {
        bail!("text file holds no sequence");
    }
    let joined = seqs.join(std::str::from_utf8(&[SEPARATOR]).unwrap());
    let len = joined.len();
    let mut payloads: Vec<Option<String>> = vec![None; len + 1];
    let mut any = false;
    for (no, line) in lines(tags) {
        if line.trim().is_empty() {
            continue;
        }
        let (pos, payload) = line
            .split_once('\t')
            .with_context(|| format!("tag line {no}: expected position<TAB>payload"))?;
        let pos: usize = pos
            .trim()
            .parse()
            .with_context(|| format!("tag line {no}: bad position {pos:?}"))?;
        if pos == 0 || pos > len + 1 {
            bail!("tag line {no}: position {pos} outside 1..={}", len + 1);
        }
        if payloads[pos - 1].replace(payload.to_owned()).is_some() {
            bail!("tag line {no}: position {pos} tagged twice");
        }
        any = true;
    }
    if !any {
        bail!("tag file holds no tags");
    }
    let terminator = payloads.pop().unwrap();
    let mut resolved = Vec::with_capacity(len + 1);
    for (k, p) in payloads.into_iter().enumerate() {
        resolved.push(p.with_context(|| format!("position {} has no tag", k + 1))?);
    }
    resolved.extend(terminator);
    Ok(TaggedText::from_text(joined.as_bytes(), &resolved)?)
}

pub fn records(records: &str, tags: &str) -> Result<TaggedText> {
    let mut seqs: Vec<String> = Vec::new();
    for (no, line) in lines(records) {
        if line.starts_with('>') {
            seqs.push(String::new());
        } else if !line.trim().is_empty() {
            match seqs.last_mut() {
                Some(s) => s.push_str(line.trim()),
                None => bail!("record line {no}: sequence before the first header"),
            }
        }
    }
    if seqs.is_empty() {
        bail!("record file holds no records");
    }
    let anns: Vec<Vec<&str>> = lines(tags)
        .map(|(_, l)| l)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().collect())
        .collect();
    if anns.is_empty() {
        bail!("tag file holds no tags");
    }
    if anns.len() != seqs.len() {
        bail!("{} records but {} tag lines", seqs.len(), anns.len());
    }
    Ok(TaggedText::from_sequences(&seqs, &anns)?)
}
