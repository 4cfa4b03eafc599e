//! Tagged text model: the concatenated text, one tag per position, the tag
//! dictionary, the suffix array and the tag array.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Byte that separates input sequences.
pub const SEPARATOR: u8 = b'$';
/// Byte appended at the end of the text; smaller than every other byte.
pub const TERMINATOR: u8 = 0x00;

/// Dense tag identifier in `[0, #distinct tags)`.
pub type TagId = u32;

pub fn is_reserved(b: u8) -> bool {
    b == SEPARATOR || b == TERMINATOR
}

/// Bijection between dense tag identifiers and external payloads
/// (graph node names and the like).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagDict {
    payloads: Vec<String>,
    ids: HashMap<String, TagId>,
}

impl TagDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_payloads(payloads: Vec<String>) -> Result<Self> {
        let mut dict = TagDict::new();
        for p in payloads {
            if dict.ids.contains_key(&p) {
                return Err(Error::Format(format!("duplicate tag payload {p:?}")));
            }
            dict.intern(&p);
        }
        Ok(dict)
    }

    pub fn intern(&mut self, payload: &str) -> TagId {
        if let Some(&id) = self.ids.get(payload) {
            return id;
        }
        let id = self.payloads.len() as TagId;
        self.payloads.push(payload.to_owned());
        self.ids.insert(payload.to_owned(), id);
        id
    }

    pub fn id(&self, payload: &str) -> Option<TagId> {
        self.ids.get(payload).copied()
    }

    pub fn payload(&self, id: TagId) -> &str {
        &self.payloads[id as usize]
    }

    pub fn payloads(&self) -> &[String] {
        &self.payloads
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }
}

/// The indexed text `T` (sequences joined by [`SEPARATOR`], closed by
/// [`TERMINATOR`]) with one tag per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedText {
    text: Vec<u8>,
    tags: Vec<TagId>,
    dict: TagDict,
}

impl TaggedText {
    /// Concatenates `sequences` as `s1 $ s2 $ ... sK <terminator>`.
    ///
    /// Each annotation list carries one payload per character, optionally
    /// followed by one more payload for the separator (or terminator) that
    /// closes the sequence. Without it, the closing byte takes the tag of the
    /// sequence's last character.
    pub fn from_sequences<S, P>(sequences: &[S], annotations: &[Vec<P>]) -> Result<Self>
    where
        S: AsRef<[u8]>,
        P: AsRef<str>,
    {
        if sequences.is_empty() {
            return Err(Error::EmptyInput);
        }
        if sequences.len() != annotations.len() {
            return Err(Error::LengthMismatch {
                sequence: sequences.len().min(annotations.len()),
                expected: sequences.len(),
                found: annotations.len(),
            });
        }
        let total: usize = sequences.iter().map(|s| s.as_ref().len() + 1).sum();
        let mut text = Vec::with_capacity(total);
        let mut tags = Vec::with_capacity(total);
        let mut dict = TagDict::new();
        let last = sequences.len() - 1;
        for (idx, (seq, ann)) in sequences.iter().zip(annotations).enumerate() {
            let seq = seq.as_ref();
            if let Some(offset) = seq.iter().position(|&b| is_reserved(b)) {
                return Err(Error::ReservedByte {
                    sequence: idx,
                    offset,
                    byte: seq[offset],
                });
            }
            let explicit_close = ann.len() == seq.len() + 1;
            if !(ann.len() == seq.len() && !seq.is_empty()) && !explicit_close {
                return Err(Error::LengthMismatch {
                    sequence: idx,
                    expected: seq.len(),
                    found: ann.len(),
                });
            }
            text.extend_from_slice(seq);
            tags.extend(ann.iter().map(|p| dict.intern(p.as_ref())));
            if !explicit_close {
                tags.push(*tags.last().unwrap());
            }
            text.push(if idx == last { TERMINATOR } else { SEPARATOR });
        }
        Ok(TaggedText { text, tags, dict })
    }

    /// Builds from an already concatenated text (separators allowed, no
    /// terminator) and one payload per position; a payload for the
    /// terminator may be appended, otherwise it copies the last tag.
    pub fn from_text<P: AsRef<str>>(text: &[u8], payloads: &[P]) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(offset) = text.iter().position(|&b| b == TERMINATOR) {
            return Err(Error::ReservedByte {
                sequence: 0,
                offset,
                byte: TERMINATOR,
            });
        }
        if payloads.len() != text.len() && payloads.len() != text.len() + 1 {
            return Err(Error::LengthMismatch {
                sequence: 0,
                expected: text.len(),
                found: payloads.len(),
            });
        }
        let mut dict = TagDict::new();
        let mut tags: Vec<TagId> = payloads.iter().map(|p| dict.intern(p.as_ref())).collect();
        if tags.len() == text.len() {
            tags.push(*tags.last().unwrap());
        }
        let mut text = text.to_vec();
        text.push(TERMINATOR);
        Ok(TaggedText { text, tags, dict })
    }

    /// Text including the final terminator.
    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn tags(&self) -> &[TagId] {
        &self.tags
    }

    pub fn dict(&self) -> &TagDict {
        &self.dict
    }

    /// Length of the text including the terminator (`n + 1`).
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn tag_payload(&self, pos: usize) -> &str {
        self.dict.payload(self.tags[pos])
    }
}

/// Suffix array of a terminated text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArray {
    sa: Vec<usize>,
}

impl SuffixArray {
    /// Prefix doubling, O(n log^2 n).
    pub fn build(text: &[u8]) -> Self {
        let n = text.len();
        let mut sa: Vec<usize> = (0..n).collect();
        if n <= 1 {
            return SuffixArray { sa };
        }
        let mut rank: Vec<usize> = text.iter().map(|&b| b as usize).collect();
        let mut next = vec![0usize; n];
        let mut k = 1;
        loop {
            let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
            sa.sort_unstable_by_key(|&i| key(i));
            next[sa[0]] = 0;
            for w in 1..n {
                next[sa[w]] = next[sa[w - 1]] + usize::from(key(sa[w - 1]) != key(sa[w]));
            }
            std::mem::swap(&mut rank, &mut next);
            if rank[sa[n - 1]] == n - 1 {
                break;
            }
            k *= 2;
        }
        SuffixArray { sa }
    }

    pub fn from_vec(sa: Vec<usize>) -> Self {
        SuffixArray { sa }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.sa
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn get(&self, q: usize) -> usize {
        self.sa[q]
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sa.len()];
        for (q, &p) in self.sa.iter().enumerate() {
            inv[p] = q;
        }
        inv
    }
}

/// Tags listed in suffix-array order: `entries[q] = tags[sa[q]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagArray {
    entries: Vec<TagId>,
}

impl TagArray {
    pub fn build(tt: &TaggedText, sa: &SuffixArray) -> Self {
        TagArray {
            entries: sa.as_slice().iter().map(|&p| tt.tags[p]).collect(),
        }
    }

    pub fn as_slice(&self) -> &[TagId] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `dist[p]` = number of non-reserved bytes starting at `p`, i.e. the longest
/// prefix of `T[p..]` a pattern could ever match.
pub fn searchable_lengths(text: &[u8]) -> Vec<usize> {
    let mut dist = vec![0; text.len()];
    let mut run = 0;
    for p in (0..text.len()).rev() {
        run = if is_reserved(text[p]) { 0 } else { run + 1 };
        dist[p] = run;
    }
    dist
}

/// LCP array of lexicographically adjacent suffixes (Kasai et al.), where
/// separators and the terminator never match anything: `lcp[q]` is the
/// searchable LCP of `T[sa[q-1]..]` and `T[sa[q]..]`, `lcp[0] = 0`.
pub fn searchable_lcp(text: &[u8], sa: &SuffixArray) -> Vec<usize> {
    let n = text.len();
    let inv = sa.inverse();
    let mut lcp = vec![0; n];
    let mut h = 0usize;
    for p in 0..n {
        let q = inv[p];
        if q == 0 {
            h = 0;
            continue;
        }
        let prev = sa.get(q - 1);
        while p + h < n && prev + h < n && text[p + h] == text[prev + h] {
            h += 1;
        }
        lcp[q] = h;
        h = h.saturating_sub(1);
    }
    let dist = searchable_lengths(text);
    for q in 1..n {
        lcp[q] = lcp[q].min(dist[sa.get(q)]).min(dist[sa.get(q - 1)]);
    }
    lcp
}
