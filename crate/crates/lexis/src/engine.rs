//! All indexes over one lexicon, with `LEXIS1` persistence.

use std::fmt;
use std::path::Path;

use crate::autocomplete::{CompactScoredTrie, Method, PrefixSubstDict, Ranker, Session, SuggestionPage, DEFAULT_DEPTH};
use crate::bidtrie::BidirectionalTrie;
use crate::codec::{Header, Reader, Writer, VERSION};
use crate::error::{Error, Result};
use crate::hashdict::{ApproxDict, CompactHashIndex, HashConfig, HashIndex};
use crate::text::{chars, Added, Lexicon, WordId};

const TAG_LEXICON: &[u8; 4] = b"LEXI";
const TAG_HASH: &[u8; 4] = b"CMPT";
const TAG_HASH2: &[u8; 4] = b"CMP2";
const TAG_BIDTRIE: &[u8; 4] = b"BTRI";
const TAG_TRIE: &[u8; 4] = b"ACTR";
const TAG_PREFIX: &[u8; 4] = b"APSD";

/// Distance search strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMethod {
    HashK1,
    HashK2,
    TrtCi,
    TrtWni,
    TrtCwni,
}

impl SearchMethod {
    pub const ALL: [SearchMethod; 5] = [Self::HashK1, Self::HashK2, Self::TrtCi, Self::TrtWni, Self::TrtCwni];

    pub fn name(self) -> &'static str {
        match self {
            Self::HashK1 => "hash_k1",
            Self::HashK2 => "hash_k2",
            Self::TrtCi => "trt_ci",
            Self::TrtWni => "trt_wni",
            Self::TrtCwni => "trt_cwni",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    /// Largest edit distance the method reports.
    pub fn max_distance(self) -> usize {
        if self == Self::HashK2 {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which components to build, and their parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub hash: HashConfig,
    pub hash_index: bool,
    /// Keep the hash index in rank-compacted form (the only form that is saved).
    pub compact: bool,
    pub bidirectional_trie: bool,
    pub completion: bool,
    pub prefix_depth: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            hash: HashConfig::default(),
            hash_index: true,
            compact: true,
            bidirectional_trie: true,
            completion: true,
            prefix_depth: DEFAULT_DEPTH,
        }
    }
}

#[derive(Clone, Debug)]
enum HashBackend {
    Plain(HashIndex),
    Compact(CompactHashIndex),
}

impl HashBackend {
    fn dict(&self) -> &dyn ApproxDict {
        match self {
            HashBackend::Plain(h) => h,
            HashBackend::Compact(h) => h,
        }
    }

    fn compacted(&self) -> CompactHashIndex {
        match self {
            HashBackend::Plain(h) => h.compact(),
            HashBackend::Compact(h) => h.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub words: usize,
    pub chars: usize,
    pub sigma: usize,
    pub hash_core_bytes: usize,
    pub hash_level2_bytes: usize,
    pub bidtrie_nodes: usize,
    pub completion_nodes: usize,
}

#[derive(Clone, Debug)]
pub struct Engine {
    cfg: EngineConfig,
    lex: Lexicon,
    hash: Option<HashBackend>,
    bidtrie: Option<BidirectionalTrie>,
    trie: Option<CompactScoredTrie>,
    prefixes: Option<PrefixSubstDict>,
}

fn missing(what: &str) -> Error {
    Error::Parameter(format!("index built without the {what}"))
}

impl Engine {
    pub fn build(lex: Lexicon, cfg: EngineConfig) -> Result<Self> {
        cfg.hash.validate()?;
        let hash = if cfg.hash_index {
            let h = HashIndex::build(&lex, cfg.hash)?;
            Some(if cfg.compact { HashBackend::Compact(h.compact()) } else { HashBackend::Plain(h) })
        } else {
            None
        };
        let bidtrie = cfg.bidirectional_trie.then(|| BidirectionalTrie::build(&lex));
        let (trie, prefixes) = if cfg.completion {
            let t = CompactScoredTrie::build(&lex);
            let p = PrefixSubstDict::build(&t, cfg.prefix_depth, cfg.hash.seed)?;
            (Some(t), Some(p))
        } else {
            (None, None)
        };
        Ok(Self { cfg, lex, hash, bidtrie, trie, prefixes })
    }

    /// Reads a dictionary file and builds. Also returns the ingestion diagnostics.
    pub fn from_dict_file(path: impl AsRef<Path>, cfg: EngineConfig) -> Result<(Self, Vec<String>)> {
        let (lex, diags) = Lexicon::load(path)?;
        Ok((Self::build(lex, cfg)?, diags))
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lex
    }

    pub fn hash_index(&self) -> Option<&dyn ApproxDict> {
        self.hash.as_ref().map(HashBackend::dict)
    }

    pub fn bidirectional_trie(&self) -> Option<&BidirectionalTrie> {
        self.bidtrie.as_ref()
    }

    pub fn completion_trie(&self) -> Option<&CompactScoredTrie> {
        self.trie.as_ref()
    }

    pub fn prefix_dict(&self) -> Option<&PrefixSubstDict> {
        self.prefixes.as_ref()
    }

    pub fn stats(&self) -> EngineStats {
        let c = self.hash.as_ref().map(HashBackend::compacted);
        EngineStats {
            words: self.lex.len(),
            chars: self.lex.total_chars(),
            sigma: self.lex.sigma(),
            hash_core_bytes: c.as_ref().map_or(0, |c| c.core_bytes()),
            hash_level2_bytes: c.as_ref().map_or(0, |c| c.level2_bytes()),
            bidtrie_nodes: self.bidtrie.as_ref().map_or(0, |t| {
                let (f, b) = t.node_counts();
                f + b
            }),
            completion_nodes: self.trie.as_ref().map_or(0, |t| t.node_count()),
        }
    }

    /// Ids of the words within the method's distance of `q`, ascending.
    pub fn search(&self, q: &[char], method: SearchMethod) -> Result<Vec<WordId>> {
        match method {
            SearchMethod::HashK1 => Ok(self.hash_index().ok_or_else(|| missing("hash index"))?.query_k1(q)),
            SearchMethod::HashK2 => self.hash_index().ok_or_else(|| missing("hash index"))?.query_k2(q),
            _ => {
                let t = self.bidtrie.as_ref().ok_or_else(|| missing("bidirectional trie"))?;
                Ok(match method {
                    SearchMethod::TrtCi => t.trt_ci(q),
                    SearchMethod::TrtWni => t.trt_wni(q, &mut t.scratch()),
                    _ => t.trt_cwni(q, &mut t.scratch()),
                })
            }
        }
    }

    /// Matching words in lexicographic order.
    pub fn search_words(&self, q: &str, method: SearchMethod) -> Result<Vec<String>> {
        let mut out: Vec<String> = self.search(&chars(q), method)?.into_iter().map(|i| self.lex.word_string(i)).collect();
        out.sort_unstable();
        Ok(out)
    }

    fn completion_parts(&self, method: Method) -> Result<(&CompactScoredTrie, Option<&PrefixSubstDict>)> {
        let t = self.trie.as_ref().ok_or_else(|| missing("completion trie"))?;
        let p = self.prefixes.as_ref();
        if method != Method::Naive && p.is_none() {
            return Err(missing("prefix dictionary"));
        }
        Ok((t, p))
    }

    /// Completions of `q` in rank order, paged on demand.
    pub fn ranker(&self, q: &str, max_errors: u8, method: Method) -> Result<Ranker<'_>> {
        let (t, p) = self.completion_parts(method)?;
        t.ranker(p, &chars(q), method, max_errors)
    }

    /// Page `page` (from 0) of `k` completions, recomputed from scratch.
    pub fn complete(&self, q: &str, k: usize, max_errors: u8, method: Method, page: usize) -> Result<SuggestionPage> {
        if k == 0 {
            return Err(Error::Parameter("page size must be at least 1".into()));
        }
        let mut r = self.ranker(q, max_errors, method)?;
        for _ in 0..page.saturating_mul(k) {
            if r.next().is_none() {
                break;
            }
        }
        r.next_page(k)
    }

    /// First page for `q`, resuming the walk of the session's previous query.
    pub fn complete_in(&self, session: &mut Session, q: &str, k: usize, max_errors: u8, method: Method) -> Result<SuggestionPage> {
        let (t, p) = self.completion_parts(method)?;
        session.search_end_node(t, p, &chars(q), method, max_errors, k)
    }

    /// Raises the score of `word` by `delta` and returns the new score.
    pub fn select(&mut self, word: &str, delta: u64) -> Result<u64> {
        let w = chars(word);
        let id = self.lex.id_of(&w).ok_or_else(|| Error::NotFound(word.to_string()))?;
        let s = match self.trie.as_mut() {
            Some(t) => t.update_score_by_id(id, delta)?,
            None if delta == 0 => return Err(Error::Parameter("score delta must be positive".into())),
            None => self.lex.score(id).saturating_add(delta),
        };
        self.lex.set_score(id, s);
        Ok(s)
    }

    /// Adds a word to the searchable indexes. Needs the uncompacted hash index;
    /// the tries are rebuilt.
    pub fn insert_word(&mut self, word: &str, score: u64) -> Result<WordId> {
        let w = chars(word);
        if let Some(id) = self.lex.id_of(&w) {
            return Ok(id);
        }
        if w.len() < 2 {
            return Err(Error::Parameter("words need at least 2 characters".into()));
        }
        if let Some(h) = &mut self.hash {
            match h {
                HashBackend::Plain(h) => {
                    h.insert_word(&w)?;
                }
                HashBackend::Compact(_) => return Err(Error::Compacted),
            }
        }
        let id = match self.lex.add(&w, score) {
            Added::New(id) => id,
            _ => unreachable!("checked above"),
        };
        if self.bidtrie.is_some() {
            self.bidtrie = Some(BidirectionalTrie::build(&self.lex));
        }
        if self.trie.is_some() {
            let t = CompactScoredTrie::build(&self.lex);
            self.prefixes = Some(PrefixSubstDict::build(&t, self.cfg.prefix_depth, self.cfg.hash.seed)?);
            self.trie = Some(t);
        }
        Ok(id)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        let compact = self.hash.as_ref().map(HashBackend::compacted);
        Header {
            version: VERSION,
            seed: self.cfg.hash.seed,
            t: compact.as_ref().map_or(0, |c| c.hasher().t()),
            alpha: self.cfg.hash.alpha,
            beta: self.cfg.hash.beta as u32,
            delta: self.cfg.hash.delta as u32,
        }
        .encode(&mut w);
        w.section(TAG_LEXICON, |s| {
            s.u64(self.lex.len() as u64);
            for (i, word) in self.lex.words().enumerate() {
                s.u32s(&word.iter().map(|&c| c as u32).collect::<Vec<_>>());
                s.u64(self.lex.score(i as WordId));
            }
        });
        if let Some(c) = &compact {
            w.section(TAG_HASH, |s| c.encode_core(s));
            if c.has_level2() {
                w.section(TAG_HASH2, |s| {
                    c.encode_level2(s);
                });
            }
        }
        if let Some(t) = &self.bidtrie {
            w.section(TAG_BIDTRIE, |s| t.encode(s));
        }
        if let Some(t) = &self.trie {
            w.section(TAG_TRIE, |s| t.encode(s));
        }
        if let Some(p) = &self.prefixes {
            w.section(TAG_PREFIX, |s| p.encode(s));
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let h = Header::decode(&mut r)?;
        let mut hash_cfg = HashConfig { seed: h.seed, alpha: h.alpha, beta: h.beta as usize, delta: h.delta as usize, ..HashConfig::default() };
        let mut lex = None;
        let (mut core, mut level2) = (None, None);
        let (mut bidtrie, mut trie, mut prefixes) = (None, None, None);
        while !r.is_done() {
            let (tag, mut s) = r.section()?;
            match &tag {
                TAG_LEXICON => lex = Some(decode_lexicon(&mut s)?),
                TAG_HASH => core = Some(s),
                TAG_HASH2 => level2 = Some(s),
                TAG_BIDTRIE => bidtrie = Some(BidirectionalTrie::decode(&mut s)?),
                TAG_TRIE => trie = Some(CompactScoredTrie::decode(&mut s)?),
                TAG_PREFIX => prefixes = Some(PrefixSubstDict::decode(&mut s)?),
                other => log::warn!("skipping unknown section {:?}", String::from_utf8_lossy(other)),
            }
        }
        let lex = lex.ok_or_else(|| Error::Format("missing lexicon section".into()))?;
        let hash = match core {
            Some(mut c) => {
                let idx = CompactHashIndex::decode(&mut c, level2.as_mut(), hash_cfg)?;
                hash_cfg = *idx.config();
                Some(HashBackend::Compact(idx))
            }
            None => None,
        };
        let d = lex.len();
        if bidtrie.as_ref().is_some_and(|t: &BidirectionalTrie| t.len() != d) || trie.as_ref().is_some_and(|t: &CompactScoredTrie| t.len() != d) {
            return Err(Error::Format("index sections disagree on the word count".into()));
        }
        let cfg = EngineConfig {
            hash: hash_cfg,
            hash_index: hash.is_some(),
            compact: true,
            bidirectional_trie: bidtrie.is_some(),
            completion: trie.is_some(),
            prefix_depth: prefixes.as_ref().map_or(DEFAULT_DEPTH, PrefixSubstDict::depth),
        };
        Ok(Self { cfg, lex, hash, bidtrie, trie, prefixes })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

fn decode_lexicon(r: &mut Reader) -> Result<Lexicon> {
    let n = r.u64()? as usize;
    let mut lex = Lexicon::new();
    for _ in 0..n {
        let w = r
            .u32s()?
            .into_iter()
            .map(|c| char::from_u32(c).ok_or_else(|| Error::Format("lexicon symbol".into())))
            .collect::<Result<Vec<_>>>()?;
        let score = r.u64()?;
        if !matches!(lex.add(&w, score), Added::New(_)) {
            return Err(Error::Format("lexicon section holds an invalid word".into()));
        }
    }
    Ok(lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Engine {
        let lex = Lexicon::from_scored([("abcd", 10), ("abce", 7), ("abcdefg", 5), ("cat", 1), ("cut", 2), ("car", 3)]);
        Engine::build(lex, EngineConfig::default()).unwrap()
    }

    #[test]
    fn search_methods_agree() {
        let e = small();
        for m in SearchMethod::ALL.into_iter().filter(|m| m.max_distance() == 1) {
            assert_eq!(e.search_words("cxt", m).unwrap(), ["cat", "cut"], "{m}");
        }
        assert_eq!(e.search_words("cxt", SearchMethod::HashK2).unwrap(), ["car", "cat", "cut"]);
        assert_eq!(e.search_words("abxy", SearchMethod::HashK2).unwrap(), ["abcd", "abce"]);
        assert_eq!(SearchMethod::parse("trt_wni"), Some(SearchMethod::TrtWni));
    }

    #[test]
    fn paging_is_stateless() {
        let e = small();
        let p0 = e.complete("abc", 2, 1, Method::Naive, 0).unwrap();
        let p1 = e.complete("abc", 2, 1, Method::Naive, 1).unwrap();
        let names = |p: &SuggestionPage| p.suggestions.iter().map(|s| s.word.clone()).collect::<Vec<_>>();
        assert_eq!(names(&p0), ["abcd", "abce"]);
        assert!(p0.has_more);
        assert_eq!(names(&p1), ["abcdefg"]);
        assert!(!p1.has_more);
        assert!(e.complete("abc", 0, 1, Method::Naive, 0).is_err());
    }

    #[test]
    fn select_promotes() {
        let mut e = small();
        for _ in 0..4 {
            e.select("abce", 1).unwrap();
        }
        assert_eq!(e.lexicon().score(e.lexicon().id_of(&chars("abce")).unwrap()), 11);
        let p = e.complete("abc", 1, 1, Method::Sl3Level, 0).unwrap();
        assert_eq!(p.suggestions[0].word, "abce");
        assert!(matches!(e.select("nope", 1), Err(Error::NotFound(_))));
    }

    #[test]
    fn round_trip() {
        let mut e = small();
        e.select("cat", 9).unwrap();
        let bytes = e.to_bytes();
        let back = Engine::from_bytes(&bytes).unwrap();
        for m in SearchMethod::ALL {
            for q in ["cat", "abx", "abcdx", "c"] {
                assert_eq!(back.search_words(q, m).unwrap(), e.search_words(q, m).unwrap());
            }
        }
        for q in ["ca", "abx", "x"] {
            assert_eq!(back.complete(q, 10, 1, Method::SlNode, 0).unwrap(), e.complete(q, 10, 1, Method::SlNode, 0).unwrap());
        }
        assert_eq!(back.to_bytes(), bytes);
        assert!(Engine::from_bytes(&bytes[..bytes.len() - 3]).is_err());
        assert!(Engine::from_bytes(b"NOTLEXIS").is_err());
    }

    #[test]
    fn partial_engines() {
        let lex = Lexicon::from_words(["cat", "cut"]);
        let cfg = EngineConfig { hash_index: false, completion: false, ..EngineConfig::default() };
        let e = Engine::build(lex, cfg).unwrap();
        assert!(e.search(&chars("cat"), SearchMethod::HashK1).is_err());
        assert!(e.complete("ca", 3, 1, Method::Naive, 0).is_err());
        let back = Engine::from_bytes(&e.to_bytes()).unwrap();
        assert_eq!(back.search_words("cot", SearchMethod::TrtCi).unwrap(), ["cat", "cut"]);
        assert!(!back.config().hash_index);
    }

    #[test]
    fn insert_needs_plain_index() {
        // ten words of one length leave room for an eleventh in that table
        let lex = Lexicon::from_words(["cat", "cut", "car", "cab", "cap", "can", "cam", "caw", "cay", "cad"]);
        let mut e = Engine::build(lex.clone(), EngineConfig::default()).unwrap();
        assert!(matches!(e.insert_word("cot", 0), Err(Error::Compacted)));
        let mut e = Engine::build(lex, EngineConfig { compact: false, ..EngineConfig::default() }).unwrap();
        e.insert_word("cot", 4).unwrap();
        for m in SearchMethod::ALL.into_iter().filter(|m| m.max_distance() == 1) {
            assert_eq!(e.search_words("cxt", m).unwrap(), ["cat", "cot", "cut"]);
        }
        assert!(matches!(e.insert_word("dog", 0), Err(Error::Capacity(_))) || e.search_words("dog", SearchMethod::HashK1).unwrap() == ["dog"]);
        assert_eq!(e.complete("co", 5, 0, Method::Naive, 0).unwrap().suggestions[0].word, "cot");
    }
}
