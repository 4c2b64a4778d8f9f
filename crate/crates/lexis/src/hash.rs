//! Polynomial rolling hash modulo the largest 32-bit prime, with O(1) hashes
//! of every single-edit variant of a query after O(m) preprocessing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text::JOKER;

/// 2^32 - 5.
pub const P: u64 = 4_294_967_291;

#[inline]
pub fn mulmod(a: u64, b: u64) -> u64 {
    a * b % P
}

#[inline]
pub fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn sym(c: char) -> u32 {
    c as u32
}

/// `h(x) = sum x_i * t^i mod P`, positions counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyHash {
    t: u64,
}

impl PolyHash {
    pub fn new(t: u64) -> Result<Self> {
        if t == 0 || t >= P {
            return Err(Error::Parameter(format!("t = {t} not in [1, P-1]")));
        }
        Ok(Self { t })
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        Self { t: rng.gen_range(1..P) }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::random(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn hash_syms(&self, w: impl IntoIterator<Item = u32>) -> u64 {
        let mut h = 0;
        let mut pw = 1;
        for s in w {
            pw = mulmod(pw, self.t);
            h = addmod(h, mulmod(s as u64 % P, pw));
        }
        h
    }

    pub fn hash_word(&self, w: &[char]) -> u64 {
        self.hash_syms(w.iter().map(|&c| sym(c)))
    }

    pub fn pow(&self, e: usize) -> u64 {
        let (mut r, mut b, mut e) = (1u64, self.t, e);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    }

    pub fn precompute(&self, q: &[char]) -> QueryPrecomp {
        QueryPrecomp::new(*self, q.iter().map(|&c| sym(c)).collect())
    }
}

/// Prefix hashes `F`, suffix hashes `G` and powers `At` of a query, all 1-based.
#[derive(Clone, Debug)]
pub struct QueryPrecomp {
    q: Vec<u32>,
    at: Vec<u64>,
    f: Vec<u64>,
    g: Vec<u64>,
}

impl QueryPrecomp {
    pub fn new(hp: PolyHash, q: Vec<u32>) -> Self {
        let m = q.len();
        // two spare powers so patterns with two insertions stay addressable
        let mut at = vec![1u64; m + 3];
        for i in 1..at.len() {
            at[i] = mulmod(at[i - 1], hp.t);
        }
        let mut f = vec![0u64; m + 1];
        for i in 1..=m {
            f[i] = addmod(f[i - 1], mulmod(q[i - 1] as u64, at[i]));
        }
        let mut g = vec![0u64; m + 2];
        for i in (1..=m).rev() {
            g[i] = mulmod(addmod(g[i + 1], q[i - 1] as u64), hp.t);
        }
        Self { q, at, f, g }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn query(&self) -> &[u32] {
        &self.q
    }

    /// `q[i]`, 1-based.
    pub fn at_pos(&self, i: usize) -> u32 {
        self.q[i - 1]
    }

    pub fn hash(&self) -> u64 {
        self.f[self.q.len()]
    }

    pub fn powers(&self) -> &[u64] {
        &self.at
    }

    pub fn prefix(&self) -> &[u64] {
        &self.f
    }

    pub fn suffix(&self) -> &[u64] {
        &self.g
    }

    pub fn pow(&self, i: usize) -> u64 {
        self.at[i]
    }

    /// Hash of `q` with position `i` replaced by `c`.
    #[inline]
    pub fn sub(&self, i: usize, c: u32) -> u64 {
        addmod(self.f[i - 1], mulmod(addmod(c as u64, self.g[i + 1]), self.at[i]))
    }

    /// Hash of `q` with `c` inserted after position `i`.
    #[inline]
    pub fn ins(&self, i: usize, c: u32) -> u64 {
        addmod(self.f[i], mulmod(addmod(c as u64, self.g[i + 1]), self.at[i + 1]))
    }

    /// Hash of `q` with position `i` removed.
    #[inline]
    pub fn del(&self, i: usize) -> u64 {
        addmod(self.f[i - 1], mulmod(self.g[i + 1], self.at[i - 1]))
    }

    /// Hash of `q` with jokers inserted after positions `g1 <= g2`.
    #[inline]
    pub fn ins2(&self, g1: usize, g2: usize) -> u64 {
        let j = JOKER as u64;
        let mid = mulmod(submod(self.f[g2], self.f[g1]), self.at[1]);
        let mut h = addmod(self.f[g1], mulmod(j, self.at[g1 + 1]));
        h = addmod(h, mid);
        h = addmod(h, mulmod(j, self.at[g2 + 2]));
        addmod(h, mulmod(self.g[g2 + 1], self.at[g2 + 2]))
    }

    /// Adjusts hash `h` for symbol `old` at 1-based position `pos` becoming `new`.
    #[inline]
    pub fn replace(&self, h: u64, pos: usize, old: u32, new: u32) -> u64 {
        let d = submod(new as u64, old as u64);
        addmod(h, mulmod(d, self.at[pos]))
    }

    pub fn hash_substitute(&self, i: usize, c: u32) -> Result<u64> {
        self.check(i, 1, self.len())?;
        Ok(self.sub(i, c))
    }

    pub fn hash_insert(&self, i: usize, c: u32) -> Result<u64> {
        self.check(i, 0, self.len())?;
        Ok(self.ins(i, c))
    }

    pub fn hash_delete(&self, i: usize) -> Result<u64> {
        self.check(i, 1, self.len())?;
        Ok(self.del(i))
    }

    fn check(&self, pos: usize, lo: usize, hi: usize) -> Result<()> {
        if pos < lo || pos > hi {
            return Err(Error::Position { pos, lo, hi });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn big_hash(t: u64, w: &[u32]) -> u64 {
        let p = BigUint::from(P);
        let t = BigUint::from(t);
        let mut sum = BigUint::from(0u32);
        for (i, &s) in w.iter().enumerate() {
            sum += BigUint::from(s) * t.modpow(&BigUint::from(i as u64 + 1), &p);
        }
        (sum % p).try_into().unwrap()
    }

    fn syms(s: &str) -> Vec<u32> {
        s.chars().map(sym).collect()
    }

    #[test]
    fn trivial_hashes() {
        let hp = PolyHash::new(12345).unwrap();
        assert_eq!(hp.hash_word(&[]), 0);
        assert_eq!(hp.hash_word(&['z']), mulmod('z' as u64, 12345));
        assert!(PolyHash::new(0).is_err());
        assert!(PolyHash::new(P).is_err());
        assert_eq!(hp.pow(3), mulmod(mulmod(12345, 12345), 12345));
    }

    #[test]
    fn precompute_boundaries() {
        let hp = PolyHash::from_seed(3);
        let pc = hp.precompute(&[]);
        assert_eq!(pc.prefix(), &[0]);
        assert_eq!(pc.suffix(), &[0, 0]);
        assert_eq!(pc.hash_insert(0, 'c' as u32).unwrap(), hp.hash_word(&['c']));
        let pc = hp.precompute(&['x']);
        assert_eq!(pc.hash_delete(1).unwrap(), 0);
    }

    #[test]
    fn position_errors() {
        let pc = PolyHash::from_seed(1).precompute(&['a', 'b']);
        assert!(matches!(pc.hash_substitute(0, 1), Err(Error::Position { pos: 0, .. })));
        assert!(pc.hash_substitute(3, 1).is_err());
        assert!(pc.hash_insert(3, 1).is_err());
        assert!(pc.hash_delete(0).is_err());
        assert_eq!(pc.hash_substitute(2, 'b' as u32).unwrap(), pc.hash());
    }

    #[test]
    fn two_insertions() {
        let hp = PolyHash::from_seed(9);
        let q = syms("abcd");
        let pc = QueryPrecomp::new(hp, q.clone());
        for g1 in 0..=4 {
            for g2 in g1..=4 {
                let mut w = q.clone();
                w.insert(g2, JOKER);
                w.insert(g1, JOKER);
                assert_eq!(pc.ins2(g1, g2), hp.hash_syms(w.iter().copied()), "{g1} {g2}");
            }
        }
    }

    fn query() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(prop_oneof![Just(97u32), Just(98), 0u32..0x11_0000, Just(JOKER)], 0..12)
    }

    proptest! {
        #[test]
        fn matches_big_integer(t in 1..P, w in query()) {
            let hp = PolyHash::new(t).unwrap();
            prop_assert_eq!(hp.hash_syms(w.iter().copied()), big_hash(t, &w));
        }

        #[test]
        fn prefix_and_suffix_agree(t in 1..P, w in query()) {
            let hp = PolyHash::new(t).unwrap();
            let pc = QueryPrecomp::new(hp, w.clone());
            prop_assert_eq!(pc.hash(), hp.hash_syms(w.iter().copied()));
            if !w.is_empty() {
                prop_assert_eq!(pc.suffix()[1], pc.hash());
            }
        }

        #[test]
        fn edits_match_rehash(t in 1..P, w in query(), i in 0usize..16, c in prop_oneof![0u32..0x11_0000, Just(JOKER)]) {
            let hp = PolyHash::new(t).unwrap();
            let pc = QueryPrecomp::new(hp, w.clone());
            let m = w.len();
            let g = i % (m + 1);
            let mut ins = w.clone();
            ins.insert(g, c);
            prop_assert_eq!(pc.hash_insert(g, c).unwrap(), hp.hash_syms(ins));
            if m > 0 {
                let p = i % m + 1;
                let mut sub = w.clone();
                sub[p - 1] = c;
                prop_assert_eq!(pc.hash_substitute(p, c).unwrap(), hp.hash_syms(sub.iter().copied()));
                prop_assert_eq!(pc.replace(pc.hash(), p, w[p - 1], c), hp.hash_syms(sub));
                let mut del = w.clone();
                let gone = del.remove(p - 1);
                prop_assert_eq!(pc.hash_delete(p).unwrap(), hp.hash_syms(del.iter().copied()));
                let back = QueryPrecomp::new(hp, del);
                prop_assert_eq!(back.hash_insert(p - 1, gone).unwrap(), pc.hash());
            }
        }
    }
}
