//! Substitution-list dictionaries: characters keyed by the hash of a word in
//! which one (or two) positions were replaced by the joker.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hash::{PolyHash, QueryPrecomp};
use crate::text::{EMPTY, JOKER};

use super::exact::{slots_for, MAX_LOAD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    /// One character per cell.
    #[default]
    Plain,
    /// 3-byte blocks `[char][sig|sig][char]`; each character carries the low
    /// 4 bits of its key hash.
    Signed,
}

impl Variant {
    pub fn as_u8(self) -> u8 {
        match self {
            Variant::Plain => 0,
            Variant::Signed => 1,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Variant::Plain),
            1 => Some(Variant::Signed),
            _ => None,
        }
    }
}

#[inline]
pub fn signature(h: u64) -> u8 {
    (h & 0xF) as u8
}

/// Table geometry shared by the plain and compacted forms. Cells of a signed
/// table are addressed by byte offsets inside 3-byte blocks; a probe landing
/// on the signature byte moves to the second character of its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Geometry {
    pub(crate) variant: Variant,
    /// Plain: cells. Signed: bytes, a multiple of 3.
    pub(crate) size: usize,
    pub(crate) slots: usize,
}

impl Geometry {
    pub(crate) fn new(variant: Variant, entries: usize, alpha: f64) -> Self {
        match variant {
            Variant::Plain => {
                let size = slots_for(entries, alpha);
                Self { variant, size, slots: size }
            }
            Variant::Signed => {
                if entries == 0 {
                    return Self { variant, size: 0, slots: 0 };
                }
                let bytes = ((entries + entries.div_ceil(2)) as f64 / alpha - 1e-9).ceil() as usize;
                let mut size = bytes.div_ceil(3) * 3;
                // keep at least one free cell
                while size / 3 * 2 <= entries {
                    size += 3;
                }
                Self { variant, size, slots: size / 3 * 2 }
            }
        }
    }

    /// Cell index where probing for key `h` starts.
    #[inline]
    pub(crate) fn start(&self, h: u64) -> usize {
        match self.variant {
            Variant::Plain => (h % self.size as u64) as usize,
            Variant::Signed => {
                let mut pos = (h % self.size as u64) as usize;
                if pos % 3 == 1 {
                    pos += 1;
                }
                pos / 3 * 2 + usize::from(pos % 3 == 2)
            }
        }
    }

    /// Byte offset of cell `s` in a signed table.
    pub(crate) fn byte_of(s: usize) -> usize {
        s / 2 * 3 + if s % 2 == 1 { 2 } else { 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SubstListDict {
    pub(crate) geo: Geometry,
    pub(crate) chars: Vec<u32>,
    pub(crate) sigs: Vec<u8>,
    pub(crate) stored: usize,
    pub(crate) alphabet: Vec<u32>,
}

impl SubstListDict {
    /// Empty table sized for `entries` characters at load factor `alpha`.
    /// `alphabet` is the sorted fallback returned for overlong probes.
    pub fn with_capacity(variant: Variant, entries: usize, alpha: f64, alphabet: Vec<u32>) -> Self {
        let geo = Geometry::new(variant, entries, alpha);
        let sigs = match variant {
            Variant::Plain => Vec::new(),
            Variant::Signed => vec![0; geo.slots],
        };
        Self { geo, chars: vec![EMPTY; geo.slots], sigs, stored: 0, alphabet }
    }

    /// Level one: each word's character at `j` keyed by the word with a joker at `j`.
    pub fn level1<'a>(words: impl Iterator<Item = &'a [u32]> + Clone, hp: PolyHash, variant: Variant, alpha: f64, alphabet: Vec<u32>) -> Self {
        let n = words.clone().map(|w| w.len()).sum();
        let mut d = Self::with_capacity(variant, n, alpha, alphabet);
        for w in words {
            let pc = QueryPrecomp::new(hp, w.to_vec());
            for j in 1..=w.len() {
                d.put(pc.sub(j, JOKER), w[j - 1]);
            }
        }
        d
    }

    /// Characters per list size for level one: `out[s]` counts the characters
    /// whose key holds exactly `s` of them. Keys are the index's own hashes.
    pub fn level1_sizes<'a>(words: impl Iterator<Item = &'a [u32]>, hp: PolyHash) -> Vec<usize> {
        let mut per_key: HashMap<u64, usize> = HashMap::new();
        for w in words {
            let pc = QueryPrecomp::new(hp, w.to_vec());
            for j in 1..=w.len() {
                *per_key.entry(pc.sub(j, JOKER)).or_default() += 1;
            }
        }
        let mut out = vec![0; per_key.values().max().map_or(1, |m| m + 1)];
        for s in per_key.into_values() {
            out[s] += s;
        }
        out
    }

    /// Level two: for every position pair `i < j`, the character at `i` keyed
    /// by the word with jokers at `i` and `j`.
    pub fn level2<'a>(words: impl Iterator<Item = &'a [u32]> + Clone, hp: PolyHash, variant: Variant, alpha: f64, alphabet: Vec<u32>) -> Self {
        let n = words.clone().map(|w| w.len() * w.len().saturating_sub(1) / 2).sum();
        let mut d = Self::with_capacity(variant, n, alpha, alphabet);
        for w in words {
            let pc = QueryPrecomp::new(hp, w.to_vec());
            for i in 1..=w.len() {
                let hi = pc.sub(i, JOKER);
                for j in i + 1..=w.len() {
                    d.put(pc.replace(hi, j, w[j - 1], JOKER), w[i - 1]);
                }
            }
        }
        d
    }

    pub(crate) fn put(&mut self, h: u64, c: u32) {
        let mut s = self.geo.start(h);
        while self.chars[s] != EMPTY {
            s += 1;
            if s == self.geo.slots {
                s = 0;
            }
        }
        self.chars[s] = c;
        if self.geo.variant == Variant::Signed {
            self.sigs[s] = signature(h);
        }
        self.stored += 1;
    }

    pub(crate) fn has_room(&self, extra: usize) -> bool {
        (self.stored + extra) as f64 <= MAX_LOAD * self.geo.slots as f64
    }

    pub(crate) fn insert_all(&mut self, entries: &[(u64, u32)]) -> Result<()> {
        if !self.has_room(entries.len()) {
            return Err(Error::Capacity(entries.len()));
        }
        for &(h, c) in entries {
            self.put(h, c);
        }
        Ok(())
    }

    pub(crate) fn add_symbol(&mut self, c: u32) {
        if let Err(p) = self.alphabet.binary_search(&c) {
            self.alphabet.insert(p, c);
        }
    }

    /// Candidate characters for key `h`, read from the start cell up to the
    /// first empty cell. More than `sigma` cells in the run gives the whole
    /// alphabet instead.
    pub fn list(&self, h: u64, out: &mut Vec<u32>) {
        out.clear();
        if self.geo.slots == 0 {
            return;
        }
        let sig = signature(h);
        let signed = self.geo.variant == Variant::Signed;
        let cap = self.alphabet.len();
        let mut s = self.geo.start(h);
        let mut seen = 0;
        while self.chars[s] != EMPTY {
            seen += 1;
            if seen > cap {
                out.clear();
                out.extend_from_slice(&self.alphabet);
                return;
            }
            if !signed || self.sigs[s] == sig {
                out.push(self.chars[s]);
            }
            s += 1;
            if s == self.geo.slots {
                s = 0;
            }
        }
    }

    pub fn variant(&self) -> Variant {
        self.geo.variant
    }

    /// Number of stored characters.
    pub fn stored(&self) -> usize {
        self.stored
    }

    /// Table size: cells for the plain variant, bytes for the signed one.
    pub fn size(&self) -> usize {
        self.geo.size
    }

    pub fn slots(&self) -> usize {
        self.geo.slots
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    /// Signed table as raw bytes, one byte per character (low 8 bits) and two
    /// signatures in each middle byte, first character in the high nibble.
    pub fn signed_bytes(&self) -> Option<Vec<u8>> {
        if self.geo.variant != Variant::Signed {
            return None;
        }
        let mut bytes = vec![0u8; self.geo.size];
        for s in 0..self.geo.slots {
            if self.chars[s] == EMPTY {
                continue;
            }
            let b = Geometry::byte_of(s);
            bytes[b] = self.chars[s] as u8;
            let mid = b / 3 * 3 + 1;
            if s % 2 == 0 {
                bytes[mid] |= self.sigs[s] << 4;
            } else {
                bytes[mid] |= self.sigs[s];
            }
        }
        Some(bytes)
    }

    pub(crate) fn cells(&self) -> impl Iterator<Item = Option<(u32, u8)>> + '_ {
        self.chars.iter().enumerate().map(move |(s, &c)| {
            (c != EMPTY).then(|| (c, self.sigs.get(s).copied().unwrap_or(0)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn syms(s: &str) -> Vec<u32> {
        s.chars().map(|c| c as u32).collect()
    }

    fn set(v: &[u32]) -> BTreeSet<char> {
        v.iter().map(|&c| char::from_u32(c).unwrap()).collect()
    }

    fn lists_for(variant: Variant) {
        let words: Vec<Vec<u32>> = ["cat", "cab", "car"].iter().map(|w| syms(w)).collect();
        let hp = PolyHash::from_seed(5);
        let alphabet = syms("abcrt");
        let d = SubstListDict::level1(words.iter().map(|w| &w[..]), hp, variant, 0.7, alphabet);
        assert_eq!(d.stored(), 9);
        let pc = QueryPrecomp::new(hp, syms("cax"));
        let mut out = Vec::new();
        d.list(pc.sub(3, JOKER), &mut out);
        assert!(set(&out).is_superset(&set(&syms("tbr"))));
        let pc = QueryPrecomp::new(hp, syms("zzzzzz"));
        d.list(pc.sub(2, JOKER), &mut out);
        assert!(out.iter().all(|c| syms("abcrt").contains(c)));
    }

    #[test]
    fn list_size_histogram() {
        let words: Vec<Vec<u32>> = ["cat", "cab", "car", "dog"].iter().map(|w| syms(w)).collect();
        let sizes = SubstListDict::level1_sizes(words.iter().map(|w| &w[..]), PolyHash::from_seed(5));
        // "ca?" holds t, b and r; every other key holds a single character
        assert_eq!(sizes, [0, 9, 0, 3]);
        assert_eq!(SubstListDict::level1_sizes(std::iter::empty(), PolyHash::from_seed(5)), [0]);
    }

    #[test]
    fn plain_lists() {
        lists_for(Variant::Plain);
    }

    #[test]
    fn signed_lists() {
        lists_for(Variant::Signed);
    }

    #[test]
    fn exact_list_contents() {
        // sparse table: no foreign key shares the run
        let words: Vec<Vec<u32>> = ["cat", "cab", "car"].iter().map(|w| syms(w)).collect();
        let hp = PolyHash::from_seed(5);
        let d = SubstListDict::level1(words.iter().map(|w| &w[..]), hp, Variant::Plain, 0.01, syms("abcrt"));
        let pc = QueryPrecomp::new(hp, syms("cat"));
        let mut out = Vec::new();
        d.list(pc.sub(3, JOKER), &mut out);
        assert_eq!(out.len(), 3);
        assert_eq!(set(&out), set(&syms("tbr")));
    }

    #[test]
    fn absent_key_is_empty() {
        let d = SubstListDict::with_capacity(Variant::Plain, 4, 0.7, syms("ab"));
        let mut out = vec![1];
        d.list(12345, &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn one_char_per_position() {
        let w = syms("alabama");
        let hp = PolyHash::from_seed(1);
        let d = SubstListDict::level1(std::iter::once(&w[..]), hp, Variant::Plain, 0.7, syms("ablm"));
        assert_eq!(d.stored(), 7);
        let d2 = SubstListDict::level2(std::iter::once(&w[..]), hp, Variant::Plain, 0.7, syms("ablm"));
        assert_eq!(d2.stored(), 21);
        let ab = syms("ab");
        let d2 = SubstListDict::level2(std::iter::once(&ab[..]), hp, Variant::Signed, 0.7, ab.clone());
        assert_eq!(d2.stored(), 1);
    }

    #[test]
    fn colliding_keys_fall_back_to_alphabet() {
        let alphabet = syms("abc");
        let mut d = SubstListDict::with_capacity(Variant::Plain, 4, 0.7, alphabet.clone());
        for c in syms("abca") {
            d.put(42, c);
        }
        let mut out = Vec::new();
        d.list(42, &mut out);
        assert_eq!(out, alphabet);
        let mut d = SubstListDict::with_capacity(Variant::Plain, 4, 0.7, alphabet.clone());
        for c in syms("abc") {
            d.put(42, c);
        }
        d.list(42, &mut out);
        assert_eq!(out, syms("abc"));
    }

    #[test]
    fn signed_geometry() {
        let g = Geometry::new(Variant::Signed, 10, 0.7);
        assert_eq!(g.size % 3, 0);
        assert!(g.size >= 22);
        assert_eq!(g.slots, g.size / 3 * 2);
        for h in 0..g.size as u64 {
            let s = g.start(h);
            let b = Geometry::byte_of(s);
            assert_eq!(b % 3 != 1, true);
            let p = (h as usize) % g.size;
            assert_eq!(b, if p % 3 == 1 { p + 1 } else { p });
        }
    }

    #[test]
    fn signatures_filter() {
        let alphabet = syms("abcd");
        let mut d = SubstListDict::with_capacity(Variant::Signed, 4, 0.7, alphabet);
        d.put(0x10, 'a' as u32);
        let other = 0x10 + d.geo.size as u64;
        assert_ne!(signature(other), signature(0x10));
        d.put(other, 'b' as u32);
        let mut out = Vec::new();
        d.list(0x10, &mut out);
        assert_eq!(out, syms("a"));
        let bytes = d.signed_bytes().unwrap();
        assert_eq!(bytes.len(), d.size());
        assert_eq!(bytes.iter().filter(|&&b| b == b'a').count(), 1);
    }
}
