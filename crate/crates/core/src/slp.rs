//! Balanced straight-line program over the text, labelled with Karp-Rabin
//! fingerprints, answering `LCP(P[a..b), T[q..])` in O(log n).
//!
//! The grammar is built by pairing rounds: round k pairs adjacent symbols of
//! round k-1 (an odd trailing symbol is carried up unchanged) and identical
//! pairs are hash-consed across the whole grammar, so the height is
//! `ceil(log2 n)` and repetitive texts share rules.

use std::collections::HashMap;

use crate::error::{Error, Result};

const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let folded = (p & MODULUS as u128) as u64 + (p >> 61) as u64;
    if folded >= MODULUS {
        folded - MODULUS
    } else {
        folded
    }
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn char_value(c: u8) -> u64 {
    c as u64 + 1
}

/// Draws a fingerprint base uniformly from `[256, 2^61 - 2]`.
pub fn random_base<R: rand::Rng + ?Sized>(rng: &mut R) -> u64 {
    rng.gen_range(256..MODULUS - 1)
}

/// Polynomial fingerprint of a string together with `base^len`, so that two
/// fingerprints compose in O(1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fingerprint {
    pub hash: u64,
    pub power: u64,
    pub len: usize,
}

impl Fingerprint {
    pub const EMPTY: Fingerprint = Fingerprint {
        hash: 0,
        power: 1,
        len: 0,
    };

    pub fn of(bytes: &[u8], base: u64) -> Self {
        bytes.iter().fold(Fingerprint::EMPTY, |acc, &c| {
            acc.concat(Fingerprint {
                hash: char_value(c),
                power: base,
                len: 1,
            })
        })
    }

    pub fn concat(self, right: Fingerprint) -> Fingerprint {
        Fingerprint {
            hash: add_mod(mul_mod(self.hash, right.power), right.hash),
            power: mul_mod(self.power, right.power),
            len: self.len + right.len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(u8),
    Pair(u32, u32),
}

#[derive(Debug, Clone)]
pub struct Slp {
    rules: Vec<Rule>,
    prints: Vec<Fingerprint>,
    heights: Vec<usize>,
    root: u32,
    base: u64,
}

impl Slp {
    pub fn build(text: &[u8], base: u64) -> Self {
        assert!(!text.is_empty(), "cannot build a grammar for an empty text");
        let mut rules = Vec::new();
        let mut terminal_ids = [u32::MAX; 256];
        let mut level: Vec<u32> = text
            .iter()
            .map(|&c| {
                if terminal_ids[c as usize] == u32::MAX {
                    terminal_ids[c as usize] = rules.len() as u32;
                    rules.push(Rule::Terminal(c));
                }
                terminal_ids[c as usize]
            })
            .collect();
        let mut pairs: HashMap<(u32, u32), u32> = HashMap::new();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for chunk in level.chunks(2) {
                if let [l, r] = *chunk {
                    let id = *pairs.entry((l, r)).or_insert_with(|| {
                        rules.push(Rule::Pair(l, r));
                        (rules.len() - 1) as u32
                    });
                    next.push(id);
                } else {
                    next.push(chunk[0]);
                }
            }
            level = next;
        }
        let root = level[0];
        Self::from_rules(rules, root, base).expect("pairing rounds yield a valid grammar")
    }

    /// Recomputes lengths, fingerprints and heights from a rule table in
    /// which every pair refers to earlier symbols.
    pub fn from_rules(rules: Vec<Rule>, root: u32, base: u64) -> Result<Self> {
        let mut prints = Vec::with_capacity(rules.len());
        let mut heights = Vec::with_capacity(rules.len());
        for (id, rule) in rules.iter().enumerate() {
            match *rule {
                Rule::Terminal(c) => {
                    prints.push(Fingerprint {
                        hash: char_value(c),
                        power: base,
                        len: 1,
                    });
                    heights.push(0);
                }
                Rule::Pair(l, r) => {
                    let (l, r) = (l as usize, r as usize);
                    if l >= id || r >= id {
                        return Err(Error::Format(format!("rule {id} refers forward")));
                    }
                    let print: Fingerprint = prints[l];
                    prints.push(print.concat(prints[r]));
                    heights.push(1 + heights[l].max(heights[r]));
                }
            }
        }
        if root as usize >= rules.len() {
            return Err(Error::Format("grammar root out of range".into()));
        }
        Ok(Slp {
            rules,
            prints,
            heights,
            root,
            base,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Number of rules, `g`.
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn height(&self) -> usize {
        self.heights[self.root as usize]
    }

    pub fn fingerprint(&self, symbol: u32) -> Fingerprint {
        self.prints[symbol as usize]
    }

    /// Length of the text the grammar derives.
    pub fn len(&self) -> usize {
        self.prints[self.root as usize].len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn expand(&self, symbol: u32) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.prints[symbol as usize].len);
        let mut stack = vec![symbol];
        while let Some(s) = stack.pop() {
            match self.rules[s as usize] {
                Rule::Terminal(c) => out.push(c),
                Rule::Pair(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    pub fn char_at(&self, mut q: usize) -> u8 {
        let mut node = self.root;
        loop {
            match self.rules[node as usize] {
                Rule::Terminal(c) => return c,
                Rule::Pair(l, r) => {
                    let ll = self.prints[l as usize].len;
                    if q < ll {
                        node = l;
                    } else {
                        q -= ll;
                        node = r;
                    }
                }
            }
        }
    }

    /// `LCP(P[start..end), T[q..])`.
    pub fn lcp(
        &self,
        pattern: &PatternHashes,
        start: usize,
        end: usize,
        q: usize,
    ) -> Result<usize> {
        let mut steps = 0;
        self.lcp_counted(pattern, start, end, q, &mut steps)
    }

    /// As [`Slp::lcp`], adding the number of grammar nodes visited to `steps`
    /// (at most `3 * max(height, 1)`).
    pub fn lcp_counted(
        &self,
        pattern: &PatternHashes,
        start: usize,
        end: usize,
        q: usize,
        steps: &mut usize,
    ) -> Result<usize> {
        if q >= self.len() {
            return Err(Error::OutOfRange {
                pos: q,
                len: self.len(),
            });
        }
        if start > end || end > pattern.len() {
            return Err(Error::InvalidSubstring {
                i: start,
                j: end,
                m: pattern.len(),
            });
        }
        let want = end - start;
        if want == 0 {
            return Ok(0);
        }

        // Descend to leaf q; the right siblings skipped on the way spell
        // T[q+1..] in order of increasing size once reversed.
        let mut node = self.root;
        let mut offset = q;
        let mut right_pieces = Vec::with_capacity(self.height());
        while let Rule::Pair(l, r) = self.rules[node as usize] {
            *steps += 1;
            let ll = self.prints[l as usize].len;
            if offset < ll {
                right_pieces.push(r);
                node = l;
            } else {
                offset -= ll;
                node = r;
            }
        }

        let matches = |sym: u32, at: usize| -> bool {
            let fp = self.prints[sym as usize];
            at + fp.len <= want && pattern.hash(start + at, fp.len) == fp.hash
        };

        let mut matched = 0;
        for piece in std::iter::once(node).chain(right_pieces.into_iter().rev()) {
            *steps += 1;
            if matches(piece, matched) {
                matched += self.prints[piece as usize].len;
                if matched == want {
                    return Ok(matched);
                }
                continue;
            }
            // The mismatch (or the end of the pattern) lies inside this piece.
            let mut x = piece;
            while let Rule::Pair(l, r) = self.rules[x as usize] {
                *steps += 1;
                if matches(l, matched) {
                    matched += self.prints[l as usize].len;
                    x = r;
                } else {
                    x = l;
                }
            }
            if matches(x, matched) {
                matched += 1;
            }
            return Ok(matched);
        }
        Ok(matched)
    }
}

/// Prefix fingerprints of a pattern, giving the fingerprint of any
/// substring in O(1).
#[derive(Debug, Clone)]
pub struct PatternHashes {
    prefix: Vec<u64>,
    powers: Vec<u64>,
}

impl PatternHashes {
    pub fn new(pattern: &[u8], base: u64) -> Self {
        let mut prefix = Vec::with_capacity(pattern.len() + 1);
        let mut powers = Vec::with_capacity(pattern.len() + 1);
        prefix.push(0);
        powers.push(1);
        for &c in pattern {
            let h = *prefix.last().unwrap();
            prefix.push(add_mod(mul_mod(h, base), char_value(c)));
            let p = *powers.last().unwrap();
            powers.push(mul_mod(p, base));
        }
        PatternHashes { prefix, powers }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fingerprint hash of `P[start..start + len)`.
    pub fn hash(&self, start: usize, len: usize) -> u64 {
        let end = start + len;
        sub_mod(
            self.prefix[end],
            mul_mod(self.prefix[start], self.powers[len]),
        )
    }

    pub fn fingerprint(&self, start: usize, len: usize) -> Fingerprint {
        Fingerprint {
            hash: self.hash(start, len),
            power: self.powers[len],
            len,
        }
    }
}
