//! Bit vector with interleaved partial counts for constant-time rank, and a
//! fixed-width packed integer array.

use crate::codec::{Reader, Writer};
use crate::error::Result;

/// Bits are grouped in blocks of `delta` 64-bit words. Each block is preceded
/// by the number of ones in all earlier blocks: `[count, w0 .. w(delta-1)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRankVector {
    len: usize,
    delta: usize,
    data: Vec<u64>,
    ones: usize,
}

impl BitRankVector {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>, delta: usize) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(&words, len, delta)
    }

    pub fn from_words(words: &[u64], len: usize, delta: usize) -> Self {
        assert!(delta >= 1, "delta must be positive");
        let blocks = words.len().div_ceil(delta);
        let mut data = Vec::with_capacity(blocks * (delta + 1));
        let mut ones = 0usize;
        for b in 0..blocks {
            data.push(ones as u64);
            for k in 0..delta {
                let w = words.get(b * delta + k).copied().unwrap_or(0);
                ones += w.count_ones() as usize;
                data.push(w);
            }
        }
        Self { len, delta, data, ones }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn word(&self, w: usize) -> u64 {
        self.data[(w / self.delta) * (self.delta + 1) + 1 + w % self.delta]
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.word(i / 64) >> (i % 64) & 1 == 1
    }

    /// Number of ones in positions `0..=i`.
    #[inline]
    pub fn rank(&self, i: usize) -> usize {
        debug_assert!(i < self.len);
        let w = i / 64;
        let base = (w / self.delta) * (self.delta + 1);
        let mut r = self.data[base] as usize;
        for k in 0..w % self.delta {
            r += self.data[base + 1 + k].count_ones() as usize;
        }
        let bits = i % 64;
        let mask = if bits == 63 { u64::MAX } else { (1u64 << (bits + 1)) - 1 };
        r + (self.data[base + 1 + w % self.delta] & mask).count_ones() as usize
    }

    /// Storage in bits, counts included.
    pub fn size_bits(&self) -> usize {
        self.data.len() * 64
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u64(self.len as u64);
        w.u32(self.delta as u32);
        let words: Vec<u64> = (0..self.len.div_ceil(64)).map(|k| self.word(k)).collect();
        w.u64s(&words);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let len = r.u64()? as usize;
        let delta = r.u32()? as usize;
        let words = r.u64s()?;
        if delta == 0 || words.len() != len.div_ceil(64) {
            return Err(crate::Error::Format("bit vector shape".into()));
        }
        Ok(Self::from_words(&words, len, delta))
    }
}

/// Integers of a fixed bit width packed back to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedArray {
    width: u32,
    len: usize,
    data: Vec<u64>,
}

impl PackedArray {
    pub fn new(width: u32, len: usize) -> Self {
        assert!(width <= 64);
        Self {
            width,
            len,
            data: vec![0; (len * width as usize).div_ceil(64)],
        }
    }

    pub fn from_values(width: u32, values: impl ExactSizeIterator<Item = u64>) -> Self {
        let mut a = Self::new(width, values.len());
        for (i, v) in values.enumerate() {
            a.set(i, v);
        }
        a
    }

    /// Bits needed for values in `0..=max`.
    pub fn width_for(max: u64) -> u32 {
        (64 - max.leading_zeros()).max(1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let w = self.width as usize;
        if w == 0 {
            return 0;
        }
        let bit = i * w;
        let (k, off) = (bit / 64, bit % 64);
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        let lo = self.data[k] >> off;
        if off + w <= 64 {
            lo & mask
        } else {
            (lo | self.data[k + 1] << (64 - off)) & mask
        }
    }

    pub fn set(&mut self, i: usize, v: u64) {
        let w = self.width as usize;
        if w == 0 {
            return;
        }
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        debug_assert!(v & !mask == 0, "value wider than {w} bits");
        let bit = i * w;
        let (k, off) = (bit / 64, bit % 64);
        self.data[k] = self.data[k] & !(mask << off) | (v & mask) << off;
        if off + w > 64 {
            let spill = off + w - 64;
            let hi_mask = (1u64 << spill) - 1;
            self.data[k + 1] = self.data[k + 1] & !hi_mask | (v & mask) >> (64 - off);
        }
    }

    pub fn size_bits(&self) -> usize {
        self.data.len() * 64
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u32(self.width);
        w.u64(self.len as u64);
        w.u64s(&self.data);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let width = r.u32()?;
        let len = r.u64()? as usize;
        let data = r.u64s()?;
        if width > 64 || data.len() != (len * width as usize).div_ceil(64) {
            return Err(crate::Error::Format("packed array shape".into()));
        }
        Ok(Self { width, len, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_vector_has_zero_rank() {
        let bv = BitRankVector::from_bits(std::iter::repeat(false).take(1000), 4);
        assert!((0..1000).all(|i| bv.rank(i) == 0));
    }

    #[test]
    fn space_overhead() {
        let bv = BitRankVector::from_words(&vec![u64::MAX; 400], 400 * 64, 4);
        assert_eq!(bv.size_bits(), 400 * 64 * 5 / 4);
        assert_eq!(bv.rank(400 * 64 - 1), 400 * 64);
    }

    #[test]
    fn packed_width() {
        assert_eq!(PackedArray::width_for(0), 1);
        assert_eq!(PackedArray::width_for(26), 5);
        assert_eq!(PackedArray::width_for(255), 8);
        assert_eq!(PackedArray::width_for(256), 9);
    }

    proptest! {
        #[test]
        fn rank_matches_linear_count(bits in prop::collection::vec(any::<bool>(), 1..2000), delta in 1usize..6) {
            let bv = BitRankVector::from_bits(bits.iter().copied(), delta);
            let mut count = 0;
            for (i, &b) in bits.iter().enumerate() {
                count += usize::from(b);
                prop_assert_eq!(bv.get(i), b);
                prop_assert_eq!(bv.rank(i), count);
            }
        }

        #[test]
        fn packed_round_trip(width in 1u32..=64, vals in prop::collection::vec(any::<u64>(), 0..200)) {
            let mask = if width == 64 { u64::MAX } else { (1 << width) - 1 };
            let vals: Vec<u64> = vals.into_iter().map(|v| v & mask).collect();
            let mut a = PackedArray::from_values(width, vals.iter().copied());
            for (i, &v) in vals.iter().enumerate() {
                prop_assert_eq!(a.get(i), v);
            }
            if !vals.is_empty() {
                a.set(0, mask);
                prop_assert_eq!(a.get(0), mask);
                if vals.len() > 1 {
                    prop_assert_eq!(a.get(1), vals[1]);
                }
            }
        }
    }
}
