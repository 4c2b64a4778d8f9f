//! Exact dictionary: one linear-probing table per word length below `beta`,
//! plus a table of references for longer words.

use crate::error::{Error, Result};
use crate::text::{WordId, EMPTY};

pub(crate) const MAX_LOAD: f64 = 0.95;

/// Slots for `count` entries at load factor `alpha`; always leaves an empty slot.
pub(crate) fn slots_for(count: usize, alpha: f64) -> usize {
    if count == 0 {
        return 0;
    }
    let s = ((count as f64) / alpha - 1e-9).ceil() as usize;
    s.max(count + 1)
}

#[derive(Clone, Debug)]
pub(crate) struct CharTable {
    pub(crate) width: usize,
    pub(crate) slots: usize,
    pub(crate) count: usize,
    /// `slots * width` symbols; a slot is empty when its first symbol is `EMPTY`.
    pub(crate) cells: Vec<u32>,
    pub(crate) ids: Vec<WordId>,
}

impl CharTable {
    fn new(width: usize, slots: usize) -> Self {
        Self {
            width,
            slots,
            count: 0,
            cells: vec![EMPTY; slots * width],
            ids: vec![EMPTY; slots],
        }
    }

    pub(crate) fn occupied(&self, s: usize) -> bool {
        self.cells[s * self.width] != EMPTY
    }

    pub(crate) fn slot(&self, s: usize) -> &[u32] {
        &self.cells[s * self.width..(s + 1) * self.width]
    }

    fn lookup(&self, w: &[u32], h: u64) -> Option<WordId> {
        if self.slots == 0 {
            return None;
        }
        let mut s = (h % self.slots as u64) as usize;
        while self.occupied(s) {
            if self.slot(s) == w {
                return Some(self.ids[s]);
            }
            s += 1;
            if s == self.slots {
                s = 0;
            }
        }
        None
    }

    fn put(&mut self, w: &[u32], h: u64, id: WordId) {
        let mut s = (h % self.slots as u64) as usize;
        while self.occupied(s) {
            s = (s + 1) % self.slots;
        }
        self.cells[s * self.width..(s + 1) * self.width].copy_from_slice(w);
        self.ids[s] = id;
        self.count += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct LongRef {
    pub(crate) offset: u32,
    pub(crate) len: u32,
    pub(crate) id: WordId,
}

const NO_REF: LongRef = LongRef { offset: EMPTY, len: 0, id: EMPTY };

#[derive(Clone, Debug)]
pub(crate) struct LongTable {
    pub(crate) slots: usize,
    pub(crate) count: usize,
    pub(crate) refs: Vec<LongRef>,
    pub(crate) text: Vec<u32>,
}

impl LongTable {
    fn word(&self, r: &LongRef) -> &[u32] {
        &self.text[r.offset as usize..(r.offset + r.len) as usize]
    }

    fn lookup(&self, w: &[u32], h: u64) -> Option<WordId> {
        if self.slots == 0 {
            return None;
        }
        let mut s = (h % self.slots as u64) as usize;
        while self.refs[s].offset != EMPTY {
            if self.word(&self.refs[s]) == w {
                return Some(self.refs[s].id);
            }
            s = (s + 1) % self.slots;
        }
        None
    }

    fn put(&mut self, w: &[u32], h: u64, id: WordId) {
        let mut s = (h % self.slots as u64) as usize;
        while self.refs[s].offset != EMPTY {
            s = (s + 1) % self.slots;
        }
        self.refs[s] = LongRef {
            offset: self.text.len() as u32,
            len: w.len() as u32,
            id,
        };
        self.text.extend_from_slice(w);
        self.count += 1;
    }
}

#[derive(Clone, Debug)]
pub struct ExactDict {
    pub(crate) beta: usize,
    pub(crate) tables: Vec<CharTable>,
    pub(crate) long: LongTable,
}

impl ExactDict {
    /// `words` yields `(symbols, hash, id)`; every word has length at least 2.
    pub fn build<'a>(words: impl Iterator<Item = (&'a [u32], u64, WordId)> + Clone, alpha: f64, beta: usize) -> Self {
        assert!(beta >= 2, "beta must be at least 2");
        let mut counts = vec![0usize; beta + 1];
        for (w, _, _) in words.clone() {
            counts[w.len().min(beta)] += 1;
        }
        let tables = (2..beta).map(|l| CharTable::new(l, slots_for(counts[l], alpha))).collect();
        let slots = slots_for(counts[beta], alpha);
        let long = LongTable { slots, count: 0, refs: vec![NO_REF; slots], text: Vec::new() };
        let mut d = Self { beta, tables, long };
        for (w, h, id) in words {
            d.put(w, h, id);
        }
        d
    }

    fn put(&mut self, w: &[u32], h: u64, id: WordId) {
        debug_assert!(w.len() >= 2);
        if w.len() < self.beta {
            self.tables[w.len() - 2].put(w, h, id);
        } else {
            self.long.put(w, h, id);
        }
    }

    #[inline]
    pub fn lookup(&self, w: &[u32], h: u64) -> Option<WordId> {
        match w.len() {
            0 | 1 => None,
            l if l < self.beta => self.tables[l - 2].lookup(w, h),
            _ => self.long.lookup(w, h),
        }
    }

    /// Whether one more word of length `len` fits under the load limit.
    pub(crate) fn has_room(&self, len: usize) -> bool {
        let (count, slots) = if len < self.beta {
            let t = &self.tables[len - 2];
            (t.count, t.slots)
        } else {
            (self.long.count, self.long.slots)
        };
        (count + 1) as f64 <= MAX_LOAD * slots as f64
    }

    pub(crate) fn insert(&mut self, w: &[u32], h: u64, id: WordId) -> Result<()> {
        if w.len() < 2 {
            return Err(Error::Parameter("words need at least 2 characters".into()));
        }
        if !self.has_room(w.len()) {
            return Err(Error::Capacity(w.len()));
        }
        self.put(w, h, id);
        Ok(())
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// `(slots, occupied)` of the table holding words of length `len`.
    pub fn table_shape(&self, len: usize) -> (usize, usize) {
        if len < self.beta {
            let t = &self.tables[len - 2];
            (t.slots, t.count)
        } else {
            (self.long.slots, self.long.count)
        }
    }

    pub fn len(&self) -> usize {
        self.tables.iter().map(|t| t.count).sum::<usize>() + self.long.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::PolyHash;

    fn syms(s: &str) -> Vec<u32> {
        s.chars().map(|c| c as u32).collect()
    }

    fn dict(words: &[&str], hp: PolyHash) -> (ExactDict, Vec<Vec<u32>>) {
        let ws: Vec<Vec<u32>> = words.iter().map(|w| syms(w)).collect();
        let entries: Vec<(Vec<u32>, u64)> = ws.iter().map(|w| (w.clone(), hp.hash_syms(w.iter().copied()))).collect();
        let d = ExactDict::build(
            entries.iter().enumerate().map(|(i, (w, h))| (&w[..], *h, i as WordId)),
            0.7,
            16,
        );
        (d, ws)
    }

    #[test]
    fn sizing_follows_load_factor() {
        assert_eq!(slots_for(1, 0.7), 2);
        assert_eq!(slots_for(7, 0.7), 10);
        assert_eq!(slots_for(0, 0.7), 0);
        let hp = PolyHash::from_seed(1);
        let (d, _) = dict(&["cat"], hp);
        assert_eq!(d.table_shape(3), (2, 1));
        // no terminator stored: the slot is exactly the three symbols
        let t = &d.tables[1];
        let s = (0..t.slots).find(|&s| t.occupied(s)).unwrap();
        assert_eq!(t.slot(s), &syms("cat")[..]);
    }

    #[test]
    fn long_words_use_references() {
        let hp = PolyHash::from_seed(2);
        let long = "abcdefghijklmnopqrst";
        let (d, ws) = dict(&[long, "ab"], hp);
        assert_eq!(d.table_shape(20), (2, 1));
        assert_eq!(d.long.text.len(), 20);
        assert_eq!(d.lookup(&ws[0], hp.hash_syms(ws[0].iter().copied())), Some(0));
    }

    #[test]
    fn lookups() {
        let hp = PolyHash::from_seed(3);
        let (mut d, ws) = dict(&["cat", "cut", "car", "scat"], hp);
        for (i, w) in ws.iter().enumerate() {
            assert_eq!(d.lookup(w, hp.hash_syms(w.iter().copied())), Some(i as WordId));
        }
        let miss = syms("cot");
        assert_eq!(d.lookup(&miss, hp.hash_syms(miss.iter().copied())), None);
        assert_eq!(d.lookup(&syms("c"), 0), None);
        let (empty, _) = dict(&[], hp);
        assert!(empty.is_empty());
        assert_eq!(empty.lookup(&miss, 5), None);
        // three words of length 3 sit in ceil(3/0.7) = 5 slots; 0.95 * 5 admits a fourth
        d.insert(&miss, hp.hash_syms(miss.iter().copied()), 9).unwrap();
        assert_eq!(d.lookup(&miss, hp.hash_syms(miss.iter().copied())), Some(9));
        let more = syms("cog");
        assert!(matches!(d.insert(&more, hp.hash_syms(more.iter().copied()), 10), Err(Error::Capacity(3))));
    }
}
