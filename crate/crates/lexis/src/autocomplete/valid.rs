//! Finding the nodes whose subtrees hold the completions.

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::hash::{sym, PolyHash};
use crate::hashdict::{AlphabetCodes, CompactSubst, SubstListDict, Variant};
use crate::text::JOKER;

use super::trie::{CompactScoredTrie, NodeId, Pos};

/// Prefix length covered by [`PrefixSubstDict`] unless configured otherwise.
pub const DEFAULT_DEPTH: usize = 6;

/// Error positions below this depth use substitution lists in [`Method::Sl3Level`].
pub const SL_LEVELS: usize = 3;

const PREFIX_ALPHA: f64 = 0.5;
const PREFIX_DELTA: usize = 4;

/// How the character at an error position is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Try every outgoing edge.
    Naive,
    /// Take characters from the substitution list, rebuild the candidate and
    /// walk it from the root.
    Sl,
    /// Follow only the edges whose character is in the substitution list.
    SlNode,
    /// `SlNode` near the root, `Naive` deeper down.
    Sl3Level,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Naive, Method::Sl, Method::SlNode, Method::Sl3Level];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Sl => "sl",
            Method::SlNode => "sl-node",
            Method::Sl3Level => "sl-3level",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    fn uses_lists(self, pos: usize) -> bool {
        match self {
            Method::Naive => false,
            Method::Sl | Method::SlNode => true,
            Method::Sl3Level => pos < SL_LEVELS,
        }
    }
}

/// Substitution lists over all distinct word prefixes of length `2..=depth`:
/// the character of a prefix at `j` is stored under the hash of the prefix
/// with a joker at `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSubstDict {
    hp: PolyHash,
    depth: usize,
    codes: AlphabetCodes,
    table: CompactSubst,
}

impl PrefixSubstDict {
    pub fn build(trie: &CompactScoredTrie, depth: usize, seed: u64) -> Result<Self> {
        if depth < 2 {
            return Err(Error::Parameter(format!("prefix depth {depth} below 2")));
        }
        let hp = PolyHash::from_seed(seed);
        let mut entries = Vec::new();
        let mut key = Vec::with_capacity(depth);
        let mut prev: &[char] = &[];
        for i in 0..trie.len() {
            let w = trie.sorted_word(i);
            let lcp = prev.iter().zip(w).take_while(|(a, b)| a == b).count();
            for l in (lcp + 1).max(2)..=w.len().min(depth) {
                for j in 0..l {
                    key.clear();
                    key.extend(w[..l].iter().map(|&c| sym(c)));
                    key[j] = JOKER;
                    entries.push((hp.hash_syms(key.iter().copied()), sym(w[j])));
                }
            }
            prev = w;
        }
        let syms: Vec<u32> = trie.alphabet().iter().map(|&c| sym(c)).collect();
        let mut dict = SubstListDict::with_capacity(Variant::Plain, entries.len(), PREFIX_ALPHA, syms.clone());
        dict.insert_all(&entries)?;
        let codes = AlphabetCodes::new(syms);
        let table = CompactSubst::from_dict(&dict, &codes, PREFIX_DELTA);
        Ok(Self { hp, depth, codes, table })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn stored(&self) -> usize {
        self.table.stored()
    }

    /// Candidate characters for the joker at `j` of `pattern` (whose entry at
    /// `j` is ignored). Returns `false` when the truncated pattern does not cover `j`.
    pub fn list(&self, pattern: &[char], j: usize, out: &mut Vec<char>) -> bool {
        let l = pattern.len().min(self.depth);
        if l < 2 || j >= l {
            return false;
        }
        let h = self.hp.hash_syms((0..l).map(|k| if k == j { JOKER } else { sym(pattern[k]) }));
        let mut syms = Vec::new();
        self.table.list(h, &self.codes, &mut syms);
        out.clear();
        out.extend(syms.into_iter().filter_map(char::from_u32));
        out.sort_unstable();
        out.dedup();
        true
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u64(self.hp.t());
        w.u64(self.depth as u64);
        w.u32s(self.codes.syms());
        self.table.encode(w);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let hp = PolyHash::new(r.u64()?)?;
        let depth = r.u64()? as usize;
        let syms = r.u32s()?;
        if depth < 2 || !syms.windows(2).all(|p| p[0] < p[1]) || syms.iter().any(|&s| char::from_u32(s).is_none()) {
            return Err(Error::Format("prefix dictionary header".into()));
        }
        let table = CompactSubst::decode(r)?;
        Ok(Self { hp, depth, codes: AlphabetCodes::new(syms), table })
    }
}

/// Roots of the completions of one query.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidNodes {
    /// Node below the position spelling the query, if the query is a prefix.
    pub exact: Option<NodeId>,
    /// Nodes below positions within one edit of the query, none inside
    /// another one's subtree or inside `exact`'s.
    pub approx: Vec<NodeId>,
}

impl ValidNodes {
    pub fn is_empty(&self) -> bool {
        self.exact.is_none() && self.approx.is_empty()
    }
}

impl CompactScoredTrie {
    /// Completion roots for `q` with up to `max_errors` (0 or 1) edits.
    pub fn valid_nodes(&self, psd: Option<&PrefixSubstDict>, q: &[char], method: Method, max_errors: u8) -> Result<ValidNodes> {
        let mut path = Vec::new();
        self.extend_path(&mut path, q);
        self.valid_nodes_on_path(psd, q, &path, method, max_errors)
    }

    /// Same as [`valid_nodes`](Self::valid_nodes) given the positions of the
    /// matched prefixes of `q`.
    pub fn valid_nodes_on_path(&self, psd: Option<&PrefixSubstDict>, q: &[char], path: &[Pos], method: Method, max_errors: u8) -> Result<ValidNodes> {
        if max_errors > 1 {
            return Err(Error::Parameter(format!("completion supports at most one error, got {max_errors}")));
        }
        if method != Method::Naive && psd.is_none() {
            return Err(Error::Parameter(format!("method {} needs the prefix dictionary", method.name())));
        }
        let m = q.len();
        let l = path.len() - 1;
        let exact = (l == m).then(|| path[m].node);
        if max_errors == 0 || self.is_empty() {
            return Ok(ValidNodes { exact: exact.filter(|_| !self.is_empty()), approx: Vec::new() });
        }
        let mut found = Vec::new();
        let mut cand = Vec::with_capacity(m + 1);
        let mut list = Vec::new();
        for (i, &p) in path.iter().enumerate() {
            if i < m {
                // substitution of q[i]
                self.one_char(psd, method, q, i, p, Some(q[i]), &q[i + 1..], &mut cand, &mut list, &mut found);
                // deletion of q[i]
                if let Some(e) = self.walk(p, &q[i + 1..]) {
                    found.push(e.node);
                }
            }
            // insertion before q[i]
            self.one_char(psd, method, q, i, p, None, &q[i..], &mut cand, &mut list, &mut found);
        }
        found.extend(exact);
        found.sort_unstable();
        found.dedup();
        let mut approx = Vec::with_capacity(found.len());
        let mut end = 0;
        for v in found {
            if v >= end {
                end = self.subtree_end(v);
                if Some(v) != exact {
                    approx.push(v);
                }
            }
        }
        Ok(ValidNodes { exact, approx })
    }

    /// Positions spelling `q[..i] c rest` for any `c` other than `skip`,
    /// branching from `p` (the position of `q[..i]`).
    #[allow(clippy::too_many_arguments)]
    fn one_char(
        &self,
        psd: Option<&PrefixSubstDict>,
        method: Method,
        q: &[char],
        i: usize,
        p: Pos,
        skip: Option<char>,
        rest: &[char],
        cand: &mut Vec<char>,
        list: &mut Vec<char>,
        found: &mut Vec<NodeId>,
    ) {
        let listed = match psd {
            Some(psd) if method.uses_lists(i) => {
                cand.clear();
                cand.extend_from_slice(&q[..i]);
                cand.push('\0');
                cand.extend_from_slice(rest);
                psd.list(cand, i, list)
            }
            _ => false,
        };
        if !listed {
            self.branches(p, |c, n| {
                if Some(c) != skip {
                    if let Some(e) = self.walk(n, rest) {
                        found.push(e.node);
                    }
                }
            });
            return;
        }
        for &c in list.iter() {
            if Some(c) == skip {
                continue;
            }
            let hit = if method == Method::Sl {
                cand[i] = c;
                self.walk(Pos::ROOT, cand)
            } else {
                self.step(p, c).and_then(|n| self.walk(n, rest))
            };
            if let Some(e) = hit {
                found.push(e.node);
            }
        }
    }

    /// Sorted indices of every word below the valid nodes.
    pub fn completion_set(&self, v: &ValidNodes) -> Vec<usize> {
        let mut out: Vec<usize> = v.exact.iter().chain(&v.approx).flat_map(|&n| self.leaf_range(n)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
