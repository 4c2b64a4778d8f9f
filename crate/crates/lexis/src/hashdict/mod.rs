//! Hash-table approximate dictionary.
//!
//! [`HashIndex`] holds the exact dictionary and the substitution lists as plain
//! tables and accepts incremental inserts. [`CompactHashIndex`] is its
//! read-only, rank-compacted counterpart. Both implement [`ApproxDict`], which
//! supplies the `k = 1` and `k = 2` searches.

mod compact;
mod exact;
mod query;
mod subst;

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use compact::{AlphabetCodes, CompactExact, CompactSubst};
pub use exact::ExactDict;
pub use subst::{signature, SubstListDict, Variant};

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::hash::{sym, PolyHash};
use crate::text::{Lexicon, WordId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HashConfig {
    pub seed: u64,
    pub alpha: f64,
    pub beta: usize,
    pub delta: usize,
    pub variant: Variant,
    pub level2: bool,
}

impl Default for HashConfig {
    fn default() -> Self {
        Self { seed: 0x1e_5151, alpha: 0.7, beta: 16, delta: 4, variant: Variant::Plain, level2: true }
    }
}

impl HashConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha {} not in (0, 1)", self.alpha)));
        }
        if self.beta < 3 {
            return Err(Error::Parameter(format!("beta {} below 3", self.beta)));
        }
        if self.delta == 0 {
            return Err(Error::Parameter("delta must be positive".into()));
        }
        Ok(())
    }
}

/// Retries for a hash multiplier without whole-word collisions.
const T_RETRIES: usize = 3;

/// Picks `t` from the seeded generator, re-drawing a few times while two
/// lexicon words share a hash. Exact comparison makes leftovers harmless.
pub fn pick_hasher(lex: &Lexicon, seed: u64) -> PolyHash {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hp = PolyHash::random(&mut rng);
    for _ in 1..T_RETRIES {
        let mut seen = HashSet::with_capacity(lex.len());
        if lex.words().all(|w| seen.insert(hp.hash_word(w))) {
            break;
        }
        log::debug!("hash collision among words with t = {}, redrawing", hp.t());
        hp = PolyHash::random(&mut rng);
    }
    hp
}

/// Operations a backend provides; the searches are built on top.
pub trait ApproxDict {
    fn hasher(&self) -> PolyHash;

    /// Exact lookup of a symbol sequence whose hash is `h`.
    fn lookup(&self, w: &[u32], h: u64) -> Option<WordId>;

    /// Level-one substitution list for a single-joker key.
    fn subst_list(&self, h: u64, out: &mut Vec<u32>);

    /// Level-two list for a double-joker key; empty without a level-two table.
    fn subst_list2(&self, h: u64, out: &mut Vec<u32>);

    fn has_level2(&self) -> bool;

    fn lookup_exact(&self, w: &[char]) -> Option<WordId> {
        let s: Vec<u32> = w.iter().map(|&c| sym(c)).collect();
        let h = self.hasher().hash_syms(s.iter().copied());
        self.lookup(&s, h)
    }

    /// Ids of all words within edit distance 1, ascending.
    fn query_k1(&self, q: &[char]) -> Vec<WordId> {
        let pc = self.hasher().precompute(q);
        let mut out = Vec::new();
        query::k1_into(self, &pc, &mut out, &mut query::Scratch::default());
        query::finish(out)
    }

    /// Number of distinct words within edit distance 1.
    fn count_k1(&self, q: &[char]) -> usize {
        self.query_k1(q).len()
    }

    /// Ids of all words within edit distance 2, ascending.
    fn query_k2(&self, q: &[char]) -> Result<Vec<WordId>> {
        if !self.has_level2() {
            return Err(Error::Parameter("index built without the level-two table".into()));
        }
        let pc = self.hasher().precompute(q);
        let mut out = Vec::new();
        query::k2_into(self, &pc, &mut out, &mut query::Scratch::default());
        Ok(query::finish(out))
    }
}

#[derive(Clone, Debug)]
pub struct HashIndex {
    cfg: HashConfig,
    hp: PolyHash,
    exact: ExactDict,
    subst: SubstListDict,
    subst2: Option<SubstListDict>,
    next_id: WordId,
}

impl HashIndex {
    pub fn build(lex: &Lexicon, cfg: HashConfig) -> Result<Self> {
        cfg.validate()?;
        let hp = pick_hasher(lex, cfg.seed);
        Ok(Self::build_with(lex, hp, cfg))
    }

    pub fn build_with(lex: &Lexicon, hp: PolyHash, cfg: HashConfig) -> Self {
        let words: Vec<Vec<u32>> = lex.words().map(|w| w.iter().map(|&c| sym(c)).collect()).collect();
        let hashes: Vec<u64> = words.iter().map(|w| hp.hash_syms(w.iter().copied())).collect();
        let alphabet: Vec<u32> = lex.alphabet().iter().map(|&c| sym(c)).collect();
        let exact = ExactDict::build(
            words.iter().zip(&hashes).enumerate().map(|(i, (w, &h))| (&w[..], h, i as WordId)),
            cfg.alpha,
            cfg.beta,
        );
        let subst = SubstListDict::level1(words.iter().map(|w| &w[..]), hp, cfg.variant, cfg.alpha, alphabet.clone());
        let subst2 = cfg
            .level2
            .then(|| SubstListDict::level2(words.iter().map(|w| &w[..]), hp, cfg.variant, cfg.alpha, alphabet));
        Self { cfg, hp, exact, subst, subst2, next_id: lex.len() as WordId }
    }

    pub fn config(&self) -> &HashConfig {
        &self.cfg
    }

    pub fn exact(&self) -> &ExactDict {
        &self.exact
    }

    pub fn subst(&self) -> &SubstListDict {
        &self.subst
    }

    pub fn subst2(&self) -> Option<&SubstListDict> {
        self.subst2.as_ref()
    }

    /// Adds a word to every table. Returns its id, or the existing id for a
    /// word already present. Fails without side effects when any table would
    /// pass its load limit.
    pub fn insert_word(&mut self, w: &[char]) -> Result<WordId> {
        if let Some(id) = self.lookup_exact(w) {
            return Ok(id);
        }
        if w.len() < 2 {
            return Err(Error::Parameter("words need at least 2 characters".into()));
        }
        let s: Vec<u32> = w.iter().map(|&c| sym(c)).collect();
        let pc = crate::hash::QueryPrecomp::new(self.hp, s.clone());
        let l1: Vec<(u64, u32)> = (1..=s.len()).map(|j| (pc.sub(j, crate::text::JOKER), s[j - 1])).collect();
        let mut l2 = Vec::new();
        if self.subst2.is_some() {
            for i in 1..=s.len() {
                let hi = pc.sub(i, crate::text::JOKER);
                for j in i + 1..=s.len() {
                    l2.push((pc.replace(hi, j, s[j - 1], crate::text::JOKER), s[i - 1]));
                }
            }
        }
        if !self.exact.has_room(s.len()) || !self.subst.has_room(l1.len()) || self.subst2.as_ref().is_some_and(|d| !d.has_room(l2.len())) {
            return Err(Error::Capacity(s.len()));
        }
        let id = self.next_id;
        self.exact.insert(&s, pc.hash(), id)?;
        self.subst.insert_all(&l1)?;
        for &c in &s {
            self.subst.add_symbol(c);
        }
        if let Some(d2) = self.subst2.as_mut() {
            d2.insert_all(&l2)?;
            for &c in &s {
                d2.add_symbol(c);
            }
        }
        self.next_id += 1;
        Ok(id)
    }

    pub fn compact(&self) -> CompactHashIndex {
        let codes = AlphabetCodes::new(self.subst.alphabet().to_vec());
        CompactHashIndex {
            cfg: self.cfg,
            hp: self.hp,
            exact: CompactExact::from_dict(&self.exact, &codes, self.cfg.delta),
            subst: CompactSubst::from_dict(&self.subst, &codes, self.cfg.delta),
            subst2: self.subst2.as_ref().map(|d| CompactSubst::from_dict(d, &codes, self.cfg.delta)),
            codes,
        }
    }
}

impl ApproxDict for HashIndex {
    fn hasher(&self) -> PolyHash {
        self.hp
    }

    #[inline]
    fn lookup(&self, w: &[u32], h: u64) -> Option<WordId> {
        self.exact.lookup(w, h)
    }

    fn subst_list(&self, h: u64, out: &mut Vec<u32>) {
        self.subst.list(h, out)
    }

    fn subst_list2(&self, h: u64, out: &mut Vec<u32>) {
        match &self.subst2 {
            Some(d) => d.list(h, out),
            None => out.clear(),
        }
    }

    fn has_level2(&self) -> bool {
        self.subst2.is_some()
    }
}

/// Read-only compacted index.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactHashIndex {
    cfg: HashConfig,
    hp: PolyHash,
    codes: AlphabetCodes,
    exact: CompactExact,
    subst: CompactSubst,
    subst2: Option<CompactSubst>,
}

thread_local! {
    static CODE_BUF: std::cell::RefCell<Vec<u64>> = const { std::cell::RefCell::new(Vec::new()) };
}

impl CompactHashIndex {
    pub fn config(&self) -> &HashConfig {
        &self.cfg
    }

    pub fn insert_word(&mut self, _w: &[char]) -> Result<WordId> {
        Err(Error::Compacted)
    }

    /// Exact dictionary and level-one lists.
    pub fn encode_core(&self, w: &mut Writer) {
        w.u64(self.hp.t());
        w.u8(self.cfg.variant.as_u8());
        w.u64(self.cfg.delta as u64);
        w.u32s(self.codes.syms());
        self.exact.encode(w);
        self.subst.encode(w);
    }

    pub fn encode_level2(&self, w: &mut Writer) -> bool {
        match &self.subst2 {
            Some(d) => {
                d.encode(w);
                true
            }
            None => false,
        }
    }

    pub fn decode(core: &mut Reader, level2: Option<&mut Reader>, cfg: HashConfig) -> Result<Self> {
        let hp = PolyHash::new(core.u64()?)?;
        let variant = Variant::from_u8(core.u8()?).ok_or_else(|| Error::Format("variant".into()))?;
        let delta = core.u64()? as usize;
        let codes = AlphabetCodes::new(core.u32s()?);
        let exact = CompactExact::decode(core)?;
        let subst = CompactSubst::decode(core)?;
        let subst2 = level2.map(CompactSubst::decode).transpose()?;
        let cfg = HashConfig { variant, delta, level2: subst2.is_some(), ..cfg };
        Ok(Self { cfg, hp, codes, exact, subst, subst2 })
    }

    /// Serialized size in bytes of the exact dictionary plus level-one lists.
    pub fn core_bytes(&self) -> usize {
        let mut w = Writer::new();
        self.encode_core(&mut w);
        w.len()
    }

    pub fn level2_bytes(&self) -> usize {
        let mut w = Writer::new();
        self.encode_level2(&mut w);
        w.len()
    }
}

impl ApproxDict for CompactHashIndex {
    fn hasher(&self) -> PolyHash {
        self.hp
    }

    fn lookup(&self, w: &[u32], h: u64) -> Option<WordId> {
        CODE_BUF.with(|b| {
            let mut buf = b.borrow_mut();
            if !self.codes.encode_into(w, &mut buf) {
                return None;
            }
            self.exact.lookup_codes(&buf, h)
        })
    }

    fn subst_list(&self, h: u64, out: &mut Vec<u32>) {
        self.subst.list(h, &self.codes, out)
    }

    fn subst_list2(&self, h: u64, out: &mut Vec<u32>) {
        match &self.subst2 {
            Some(d) => d.list(h, &self.codes, out),
            None => out.clear(),
        }
    }

    fn has_level2(&self) -> bool {
        self.subst2.is_some()
    }
}
