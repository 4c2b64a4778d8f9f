//! Rank-compacted tables: empty cells are dropped, a bit vector marks the
//! occupied cells of the original table, and characters are stored as packed
//! alphabet codes.

use crate::bits::{BitRankVector, PackedArray};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::text::WordId;

use super::exact::ExactDict;
use super::subst::{signature, Geometry, SubstListDict, Variant};

/// Maps symbols to dense codes `0..sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetCodes {
    syms: Vec<u32>,
    width: u32,
}

impl AlphabetCodes {
    pub fn new(syms: Vec<u32>) -> Self {
        let width = PackedArray::width_for(syms.len().saturating_sub(1) as u64);
        Self { syms, width }
    }

    #[inline]
    pub fn code(&self, s: u32) -> Option<u64> {
        self.syms.binary_search(&s).ok().map(|c| c as u64)
    }

    #[inline]
    pub fn sym(&self, code: u64) -> u32 {
        self.syms[code as usize]
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn syms(&self) -> &[u32] {
        &self.syms
    }

    /// Encodes `w`; `None` if a symbol is outside the alphabet.
    pub fn encode_into(&self, w: &[u32], out: &mut Vec<u64>) -> bool {
        out.clear();
        for &s in w {
            match self.code(s) {
                Some(c) => out.push(c),
                None => return false,
            }
        }
        true
    }
}

/// Walks a compacted linear-probing run starting at original slot `s`,
/// yielding `(original slot, dense index)` until the first empty slot.
struct Run<'a> {
    bv: &'a BitRankVector,
    slot: usize,
    dense: usize,
    first: bool,
}

impl<'a> Run<'a> {
    fn new(bv: &'a BitRankVector, slot: usize) -> Self {
        Self { bv, slot, dense: 0, first: true }
    }
}

impl Iterator for Run<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bv.is_empty() {
            return None;
        }
        if self.first {
            self.first = false;
            if !self.bv.get(self.slot) {
                return None;
            }
            self.dense = self.bv.rank(self.slot) - 1;
            return Some(self.dense);
        }
        self.slot += 1;
        if self.slot == self.bv.len() {
            self.slot = 0;
            self.dense = 0;
        } else {
            self.dense += 1;
        }
        if !self.bv.get(self.slot) {
            return None;
        }
        Some(self.dense)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct CompactTable {
    width: usize,
    bv: BitRankVector,
    codes: PackedArray,
    ids: PackedArray,
}

impl CompactTable {
    fn lookup(&self, w: &[u64], h: u64) -> Option<WordId> {
        let slots = self.bv.len();
        if slots == 0 {
            return None;
        }
        let start = (h % slots as u64) as usize;
        for d in Run::new(&self.bv, start) {
            let base = d * self.width;
            if (0..self.width).all(|k| self.codes.get(base + k) == w[k]) {
                return Some(self.ids.get(d) as WordId);
            }
        }
        None
    }

    fn encode(&self, w: &mut Writer) {
        w.u64(self.width as u64);
        self.bv.encode(w);
        self.codes.encode(w);
        self.ids.encode(w);
    }

    fn decode(r: &mut Reader) -> Result<Self> {
        Ok(Self {
            width: r.u64()? as usize,
            bv: BitRankVector::decode(r)?,
            codes: PackedArray::decode(r)?,
            ids: PackedArray::decode(r)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct CompactLong {
    bv: BitRankVector,
    offsets: PackedArray,
    lens: PackedArray,
    ids: PackedArray,
    text: PackedArray,
}

impl CompactLong {
    fn lookup(&self, w: &[u64], h: u64) -> Option<WordId> {
        let slots = self.bv.len();
        if slots == 0 {
            return None;
        }
        let start = (h % slots as u64) as usize;
        for d in Run::new(&self.bv, start) {
            let (off, len) = (self.offsets.get(d) as usize, self.lens.get(d) as usize);
            if len == w.len() && (0..len).all(|k| self.text.get(off + k) == w[k]) {
                return Some(self.ids.get(d) as WordId);
            }
        }
        None
    }
}

/// Compacted exact dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactExact {
    beta: usize,
    tables: Vec<CompactTable>,
    long: CompactLong,
}

fn id_width(d: &ExactDict) -> u32 {
    let max = d
        .tables
        .iter()
        .flat_map(|t| t.ids.iter().copied().filter(|&i| i != crate::text::EMPTY))
        .chain(d.long.refs.iter().map(|r| r.id).filter(|&i| i != crate::text::EMPTY))
        .max()
        .unwrap_or(0);
    PackedArray::width_for(max as u64)
}

impl CompactExact {
    pub fn from_dict(d: &ExactDict, codes: &AlphabetCodes, delta: usize) -> Self {
        let idw = id_width(d);
        let tables = d
            .tables
            .iter()
            .map(|t| {
                let bv = BitRankVector::from_bits((0..t.slots).map(|s| t.occupied(s)), delta);
                let occupied: Vec<usize> = (0..t.slots).filter(|&s| t.occupied(s)).collect();
                let mut packed = PackedArray::new(codes.width(), occupied.len() * t.width);
                let mut ids = PackedArray::new(idw, occupied.len());
                for (k, &s) in occupied.iter().enumerate() {
                    for (j, &c) in t.slot(s).iter().enumerate() {
                        packed.set(k * t.width + j, codes.code(c).expect("symbol in alphabet"));
                    }
                    ids.set(k, t.ids[s] as u64);
                }
                CompactTable { width: t.width, bv, codes: packed, ids }
            })
            .collect();
        let l = &d.long;
        let bv = BitRankVector::from_bits(l.refs.iter().map(|r| r.offset != crate::text::EMPTY), delta);
        let used: Vec<_> = l.refs.iter().filter(|r| r.offset != crate::text::EMPTY).collect();
        let text_len = l.text.len() as u64;
        let max_len = used.iter().map(|r| r.len).max().unwrap_or(0) as u64;
        let long = CompactLong {
            bv,
            offsets: PackedArray::from_values(PackedArray::width_for(text_len), used.iter().map(|r| r.offset as u64)),
            lens: PackedArray::from_values(PackedArray::width_for(max_len), used.iter().map(|r| r.len as u64)),
            ids: PackedArray::from_values(idw, used.iter().map(|r| r.id as u64)),
            text: PackedArray::from_values(codes.width(), l.text.iter().map(|&c| codes.code(c).expect("symbol in alphabet"))),
        };
        Self { beta: d.beta, tables, long }
    }

    /// Looks up an already encoded word.
    #[inline]
    pub fn lookup_codes(&self, w: &[u64], h: u64) -> Option<WordId> {
        match w.len() {
            0 | 1 => None,
            l if l < self.beta => self.tables[l - 2].lookup(w, h),
            _ => self.long.lookup(w, h),
        }
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u64(self.beta as u64);
        for t in &self.tables {
            t.encode(w);
        }
        let l = &self.long;
        l.bv.encode(w);
        l.offsets.encode(w);
        l.lens.encode(w);
        l.ids.encode(w);
        l.text.encode(w);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let beta = r.u64()? as usize;
        if !(2..=1024).contains(&beta) {
            return Err(Error::Format(format!("beta {beta}")));
        }
        let tables = (2..beta).map(|_| CompactTable::decode(r)).collect::<Result<Vec<_>>>()?;
        for (k, t) in tables.iter().enumerate() {
            if t.width != k + 2 || t.codes.len() != t.bv.count_ones() * t.width || t.ids.len() != t.bv.count_ones() {
                return Err(Error::Format("exact table shape".into()));
            }
        }
        let long = CompactLong {
            bv: BitRankVector::decode(r)?,
            offsets: PackedArray::decode(r)?,
            lens: PackedArray::decode(r)?,
            ids: PackedArray::decode(r)?,
            text: PackedArray::decode(r)?,
        };
        Ok(Self { beta, tables, long })
    }
}

/// Compacted substitution-list dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactSubst {
    geo: Geometry,
    bv: BitRankVector,
    codes: PackedArray,
    sigs: PackedArray,
}

impl CompactSubst {
    pub fn from_dict(d: &SubstListDict, codes: &AlphabetCodes, delta: usize) -> Self {
        let bv = BitRankVector::from_bits(d.cells().map(|c| c.is_some()), delta);
        let cells: Vec<(u32, u8)> = d.cells().flatten().collect();
        let packed = PackedArray::from_values(codes.width(), cells.iter().map(|&(c, _)| codes.code(c).expect("symbol in alphabet")));
        let sigs = match d.geo.variant {
            Variant::Plain => PackedArray::new(4, 0),
            Variant::Signed => PackedArray::from_values(4, cells.iter().map(|&(_, s)| s as u64)),
        };
        Self { geo: d.geo, bv, codes: packed, sigs }
    }

    pub fn list(&self, h: u64, alphabet: &AlphabetCodes, out: &mut Vec<u32>) {
        out.clear();
        if self.geo.slots == 0 {
            return;
        }
        let sig = signature(h) as u64;
        let signed = self.geo.variant == Variant::Signed;
        let cap = alphabet.syms().len();
        for (seen, d) in Run::new(&self.bv, self.geo.start(h)).enumerate() {
            if seen >= cap {
                out.clear();
                out.extend_from_slice(alphabet.syms());
                return;
            }
            if !signed || self.sigs.get(d) == sig {
                out.push(alphabet.sym(self.codes.get(d)));
            }
        }
    }

    pub fn stored(&self) -> usize {
        self.codes.len()
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u8(self.geo.variant.as_u8());
        w.u64(self.geo.size as u64);
        self.bv.encode(w);
        self.codes.encode(w);
        self.sigs.encode(w);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let variant = Variant::from_u8(r.u8()?).ok_or_else(|| Error::Format("variant".into()))?;
        let size = r.u64()? as usize;
        let slots = match variant {
            Variant::Plain => size,
            Variant::Signed => size / 3 * 2,
        };
        let geo = Geometry { variant, size, slots };
        let bv = BitRankVector::decode(r)?;
        let codes = PackedArray::decode(r)?;
        let sigs = PackedArray::decode(r)?;
        if bv.len() != slots || codes.len() != bv.count_ones() {
            return Err(Error::Format("substitution table shape".into()));
        }
        Ok(Self { geo, bv, codes, sigs })
    }
}
