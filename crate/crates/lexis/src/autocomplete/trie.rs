use std::cmp::Reverse;

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::text::{Lexicon, WordId, EMPTY};

use super::{lcp_array, prefix_sum, sort_and_lcp, Suggestion};

pub type NodeId = u32;

pub const ROOT: NodeId = 0;

/// A position in the trie: `depth` characters spelled, on the edge that ends
/// at `node` (or exactly at `node` when `depth` equals its depth).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pos {
    pub node: NodeId,
    pub depth: u32,
}

impl Pos {
    pub const ROOT: Pos = Pos { node: ROOT, depth: 0 };
}

/// Deepest position reached by a prefix of the query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Locus {
    pub node: NodeId,
    /// Characters left on the edge before `node`; 0 means at the node.
    pub offset: u32,
    /// Matched query length.
    pub depth: usize,
}

/// Path-compressed trie over the sorted words. Nodes are numbered in
/// depth-first order, so a subtree is the id range `v..end[v]`.
///
/// A word that is a proper prefix of another one ends in a leaf hanging off
/// an empty edge, listed before the other children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactScoredTrie {
    text: Vec<char>,
    word_off: Vec<u32>,
    ids: Vec<WordId>,
    rank_of: Vec<u32>,
    alphabet: Vec<char>,

    parent: Vec<NodeId>,
    depth: Vec<u32>,
    edge_off: Vec<u32>,
    edge_len: Vec<u32>,
    leaf: Vec<u32>,
    end: Vec<NodeId>,
    child_start: Vec<u32>,
    children: Vec<NodeId>,
    score: Vec<u64>,
    best: Vec<u32>,
    leaf_node: Vec<NodeId>,
}

struct Builder<'a> {
    words: &'a [&'a [char]],
    lcp: &'a [usize],
    word_off: &'a [u32],
    parent: Vec<NodeId>,
    depth: Vec<u32>,
    edge_off: Vec<u32>,
    edge_len: Vec<u32>,
    leaf: Vec<u32>,
    end: Vec<NodeId>,
}

impl Builder<'_> {
    fn push(&mut self, parent: NodeId, depth: usize, off: u32, len: usize, leaf: u32) -> NodeId {
        let id = self.parent.len() as NodeId;
        self.parent.push(parent);
        self.depth.push(depth as u32);
        self.edge_off.push(off);
        self.edge_len.push(len as u32);
        self.leaf.push(leaf);
        self.end.push(id + 1);
        id
    }

    /// Node for the sorted range `lo..hi`, whose words agree on `depth` characters.
    fn range(&mut self, lo: usize, hi: usize, depth: usize, parent: NodeId, parent_depth: usize) {
        let off = self.word_off[lo] + parent_depth as u32;
        let single_leaf = hi - lo == 1 && self.words[lo].len() == depth;
        let id = self.push(parent, depth, off, depth - parent_depth, if single_leaf { lo as u32 } else { EMPTY });
        if single_leaf {
            return;
        }
        let mut i = lo;
        if self.words[lo].len() == depth {
            self.push(id, depth, self.word_off[lo] + depth as u32, 0, lo as u32);
            i += 1;
        }
        while i < hi {
            let mut j = i + 1;
            while j < hi && self.lcp[j - 1] > depth {
                j += 1;
            }
            let child_depth = if j - i == 1 { self.words[i].len() } else { self.lcp[i..j - 1].iter().copied().min().unwrap() };
            self.range(i, j, child_depth, id, depth);
            i = j;
        }
        self.end[id as usize] = self.parent.len() as NodeId;
    }
}

impl CompactScoredTrie {
    pub fn build(lex: &Lexicon) -> Self {
        let (order, _) = sort_and_lcp(lex);
        let words: Vec<&[char]> = order.iter().map(|&i| lex.word(i)).collect();
        let scores = order.iter().map(|&i| lex.score(i)).collect();
        Self::from_sorted(&words, scores, order)
    }

    /// `words` must be strictly increasing; `scores` and `ids` follow them.
    pub fn from_sorted(words: &[&[char]], scores: Vec<u64>, ids: Vec<WordId>) -> Self {
        let lcp = lcp_array(words);
        let lens: Vec<u64> = words.iter().map(|w| w.len() as u64).collect();
        let word_off: Vec<u32> = std::iter::once(0).chain(prefix_sum(&lens).into_iter().map(|x| x as u32)).collect();
        let text: Vec<char> = words.iter().flat_map(|w| w.iter().copied()).collect();
        let mut alphabet = text.clone();
        alphabet.sort_unstable();
        alphabet.dedup();

        let mut b = Builder {
            words,
            lcp: &lcp,
            word_off: &word_off,
            parent: Vec::new(),
            depth: Vec::new(),
            edge_off: Vec::new(),
            edge_len: Vec::new(),
            leaf: Vec::new(),
            end: Vec::new(),
        };
        if words.is_empty() {
            b.push(EMPTY, 0, 0, 0, EMPTY);
        } else {
            // the root never takes a label, even if all words share a prefix
            b.range(0, words.len(), 0, EMPTY, 0);
        }
        let Builder { parent, depth, edge_off, edge_len, leaf, end, .. } = b;
        let n = parent.len();

        let mut child_start = vec![0u32; n + 1];
        for &p in &parent[1..] {
            child_start[p as usize + 1] += 1;
        }
        for v in 0..n {
            child_start[v + 1] += child_start[v];
        }
        let mut fill = child_start.clone();
        let mut children = vec![0; n.saturating_sub(1)];
        for v in 1..n {
            let p = parent[v] as usize;
            children[fill[p] as usize] = v as NodeId;
            fill[p] += 1;
        }

        let mut leaf_node = vec![0; words.len()];
        for (v, &l) in leaf.iter().enumerate() {
            if l != EMPTY {
                leaf_node[l as usize] = v as NodeId;
            }
        }
        let mut rank_of = vec![EMPTY; ids.iter().map(|&i| i as usize + 1).max().unwrap_or(0)];
        for (r, &id) in ids.iter().enumerate() {
            rank_of[id as usize] = r as u32;
        }

        let mut t = Self {
            text,
            word_off,
            ids,
            rank_of,
            alphabet,
            parent,
            depth,
            edge_off,
            edge_len,
            leaf,
            end,
            child_start,
            children,
            score: vec![0; n],
            best: vec![EMPTY; n],
            leaf_node,
        };
        for (i, s) in scores.into_iter().enumerate() {
            let v = t.leaf_node[i] as usize;
            t.score[v] = s;
            t.best[v] = i as u32;
        }
        for v in (1..n).rev() {
            let p = t.parent[v] as usize;
            if t.key(v as NodeId) > t.key(p as NodeId) {
                t.score[p] = t.score[v];
                t.best[p] = t.best[v];
            }
        }
        t
    }

    /// Ranking key: higher score first, then lexicographically smaller word.
    #[inline]
    pub(crate) fn key(&self, v: NodeId) -> (u64, Reverse<u32>) {
        (self.score[v as usize], Reverse(self.best[v as usize]))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Word at position `i` of the sorted order.
    pub fn sorted_word(&self, i: usize) -> &[char] {
        &self.text[self.word_off[i] as usize..self.word_off[i + 1] as usize]
    }

    pub fn sorted_id(&self, i: usize) -> WordId {
        self.ids[i]
    }

    pub fn sorted_score(&self, i: usize) -> u64 {
        self.score[self.leaf_node[i] as usize]
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v as usize] as usize
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        (v != ROOT).then(|| self.parent[v as usize])
    }

    pub fn score(&self, v: NodeId) -> u64 {
        self.score[v as usize]
    }

    /// Sorted index of the word ending at leaf `v`.
    pub fn leaf(&self, v: NodeId) -> Option<usize> {
        let l = self.leaf[v as usize];
        (l != EMPTY).then_some(l as usize)
    }

    /// First id after the subtree of `v`.
    pub fn subtree_end(&self, v: NodeId) -> NodeId {
        self.end[v as usize]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[self.child_start[v as usize] as usize..self.child_start[v as usize + 1] as usize]
    }

    pub fn edge_label(&self, v: NodeId) -> &[char] {
        let o = self.edge_off[v as usize] as usize;
        &self.text[o..o + self.edge_len[v as usize] as usize]
    }

    /// Sorted indices of the words below `v`, a contiguous range.
    pub fn leaf_range(&self, v: NodeId) -> std::ops::Range<usize> {
        let first = (v..self.end[v as usize]).find_map(|u| self.leaf(u));
        let last = (v..self.end[v as usize]).rev().find_map(|u| self.leaf(u));
        match (first, last) {
            (Some(a), Some(b)) => a..b + 1,
            _ => 0..0,
        }
    }

    fn first_char(&self, v: NodeId) -> Option<char> {
        (self.edge_len[v as usize] > 0).then(|| self.text[self.edge_off[v as usize] as usize])
    }

    pub fn child(&self, v: NodeId, c: char) -> Option<NodeId> {
        let ch = self.children(v);
        ch.binary_search_by_key(&Some(c), |&u| self.first_char(u)).ok().map(|k| ch[k])
    }

    #[inline]
    pub fn step(&self, p: Pos, c: char) -> Option<Pos> {
        let v = p.node as usize;
        if p.depth < self.depth[v] {
            let pd = self.depth[self.parent[v] as usize];
            let at = self.edge_off[v] + (p.depth - pd);
            (self.text[at as usize] == c).then_some(Pos { node: p.node, depth: p.depth + 1 })
        } else {
            self.child(p.node, c).map(|u| Pos { node: u, depth: p.depth + 1 })
        }
    }

    /// Every one-character extension of `p`.
    pub fn branches(&self, p: Pos, mut f: impl FnMut(char, Pos)) {
        let v = p.node as usize;
        if p.depth < self.depth[v] {
            let pd = self.depth[self.parent[v] as usize];
            let c = self.text[(self.edge_off[v] + p.depth - pd) as usize];
            f(c, Pos { node: p.node, depth: p.depth + 1 });
        } else {
            for &u in self.children(p.node) {
                if let Some(c) = self.first_char(u) {
                    f(c, Pos { node: u, depth: p.depth + 1 });
                }
            }
        }
    }

    /// Follows all of `s` from `p`.
    pub fn walk(&self, mut p: Pos, s: &[char]) -> Option<Pos> {
        for &c in s {
            p = self.step(p, c)?;
        }
        Some(p)
    }

    /// Extends `path` (positions for the first `path.len() - 1` characters of
    /// `q`) as far as `q` matches.
    pub fn extend_path(&self, path: &mut Vec<Pos>, q: &[char]) {
        if path.is_empty() {
            path.push(Pos::ROOT);
        }
        while path.len() <= q.len() {
            match self.step(*path.last().unwrap(), q[path.len() - 1]) {
                Some(p) => path.push(p),
                None => break,
            }
        }
    }

    pub fn locus_of(&self, p: Pos, matched: usize) -> Locus {
        Locus { node: p.node, offset: self.depth[p.node as usize] - p.depth, depth: matched }
    }

    /// Deepest position matching a prefix of `q`, starting from `start`
    /// (the locus of a prefix of `q`) or the root.
    pub fn find_locus(&self, q: &[char], start: Option<Locus>) -> Locus {
        let mut p = match start {
            Some(l) => Pos { node: l.node, depth: self.depth[l.node as usize] - l.offset },
            None => Pos::ROOT,
        };
        let mut d = p.depth as usize;
        while d < q.len() {
            match self.step(p, q[d]) {
                Some(n) => {
                    p = n;
                    d += 1;
                }
                None => break,
            }
        }
        self.locus_of(p, d)
    }

    /// Sorted index of `w`, if present.
    pub fn find_word(&self, w: &[char]) -> Option<usize> {
        let p = self.walk(Pos::ROOT, w)?;
        if p.depth != self.depth[p.node as usize] {
            return None;
        }
        self.leaf(p.node).or_else(|| {
            let first = *self.children(p.node).first()?;
            (self.edge_len[first as usize] == 0).then(|| self.leaf(first)).flatten()
        })
    }

    pub(crate) fn suggestion(&self, i: usize, exact: bool) -> Suggestion {
        Suggestion {
            id: self.ids[i],
            word: self.sorted_word(i).iter().collect(),
            score: self.sorted_score(i),
            exact,
        }
    }

    /// Adds `delta` to the score of `w` and raises its ancestors where the
    /// word now ranks first. Returns the new score.
    pub fn update_score(&mut self, w: &[char], delta: u64) -> Result<u64> {
        if delta == 0 {
            return Err(Error::Parameter("score delta must be positive".into()));
        }
        let i = self.find_word(w).ok_or_else(|| Error::NotFound(w.iter().collect()))?;
        Ok(self.bump(i, delta))
    }

    /// Same as [`update_score`](Self::update_score) by lexicon id.
    pub fn update_score_by_id(&mut self, id: WordId, delta: u64) -> Result<u64> {
        if delta == 0 {
            return Err(Error::Parameter("score delta must be positive".into()));
        }
        match self.rank_of.get(id as usize) {
            Some(&r) if r != EMPTY => Ok(self.bump(r as usize, delta)),
            _ => Err(Error::NotFound(format!("word id {id}"))),
        }
    }

    fn bump(&mut self, i: usize, delta: u64) -> u64 {
        let leaf = self.leaf_node[i];
        let s = self.score[leaf as usize].saturating_add(delta);
        self.score[leaf as usize] = s;
        let mut v = leaf;
        while v != ROOT {
            let p = self.parent[v as usize];
            if self.key(leaf) <= self.key(p) {
                break;
            }
            self.score[p as usize] = s;
            self.best[p as usize] = i as u32;
            v = p;
        }
        s
    }

    /// Checks that every internal node holds the best key of its children.
    pub fn scores_consistent(&self) -> bool {
        (0..self.node_count() as NodeId).all(|v| match self.leaf(v) {
            Some(i) => self.best[v as usize] == i as u32,
            None => match self.children(v).iter().map(|&u| self.key(u)).max() {
                Some(k) => k == self.key(v),
                None => v == ROOT && self.is_empty(),
            },
        })
    }

    /// Stores the sorted words, their scores and ids. Decoding rebuilds the nodes.
    pub fn encode(&self, w: &mut Writer) {
        w.u32s(&self.text.iter().map(|&c| c as u32).collect::<Vec<_>>());
        w.u32s(&self.word_off);
        w.u32s(&self.ids);
        w.u64s(&(0..self.len()).map(|i| self.sorted_score(i)).collect::<Vec<_>>());
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let text = r
            .u32s()?
            .into_iter()
            .map(|c| char::from_u32(c).ok_or_else(|| Error::Format("trie text symbol".into())))
            .collect::<Result<Vec<_>>>()?;
        let word_off = r.u32s()?;
        let ids = r.u32s()?;
        let scores = r.u64s()?;
        let d = ids.len();
        let ok = word_off.len() == d + 1
            && scores.len() == d
            && word_off.first() == Some(&0)
            && word_off.last().is_some_and(|&e| e as usize == text.len())
            && word_off.windows(2).all(|p| p[1] >= p[0] + 2);
        if !ok {
            return Err(Error::Format("trie word table inconsistent".into()));
        }
        let words: Vec<&[char]> = word_off.windows(2).map(|p| &text[p[0] as usize..p[1] as usize]).collect();
        if !words.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::Format("trie words not sorted".into()));
        }
        let mut seen = vec![false; ids.iter().map(|&i| i as usize + 1).max().unwrap_or(0)];
        if ids.iter().any(|&i| std::mem::replace(&mut seen[i as usize], true)) {
            return Err(Error::Format("duplicate word id".into()));
        }
        Ok(Self::from_sorted(&words, scores, ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::chars;
    use proptest::prelude::*;

    fn label(t: &CompactScoredTrie, v: NodeId) -> String {
        t.edge_label(v).iter().collect()
    }

    /// Edge labels in depth-first order, indented by tree level.
    fn layout(t: &CompactScoredTrie) -> Vec<String> {
        let mut out = Vec::new();
        for v in 1..t.node_count() as NodeId {
            let mut lvl = 0;
            let mut u = v;
            while let Some(p) = t.parent(u) {
                lvl += 1;
                u = p;
            }
            out.push(format!("{}{}", " ".repeat(lvl - 1), label(t, v)));
        }
        out
    }

    #[test]
    fn worked_construction() {
        let lex = Lexicon::from_words(["AbCdeAa", "AbCdeBbbOo", "AbCdeBbbSss", "AbEfg"]);
        let t = CompactScoredTrie::build(&lex);
        assert_eq!(layout(&t), ["Ab", " Cde", "  Aa", "  Bbb", "   Oo", "   Sss", " Efg"]);
        assert_eq!(t.node_count(), 8);
        for i in 0..t.len() {
            let leaf = t.leaf_node[i];
            assert_eq!(t.depth(leaf), t.sorted_word(i).len());
        }
    }

    #[test]
    fn single_word_and_empty() {
        let t = CompactScoredTrie::build(&Lexicon::from_words(["word"]));
        assert_eq!(layout(&t), ["word"]);
        let t = CompactScoredTrie::build(&Lexicon::new());
        assert_eq!(t.node_count(), 1);
        assert!(t.scores_consistent());
        assert_eq!(t.find_locus(&chars("ab"), None).depth, 0);
    }

    #[test]
    fn prefix_words_get_empty_leaves() {
        let lex = Lexicon::from_scored([("abcd", 10), ("abcdefg", 5)]);
        let t = CompactScoredTrie::build(&lex);
        assert_eq!(layout(&t), ["abcd", " ", " efg"]);
        assert_eq!(t.score(ROOT), 10);
        assert_eq!(t.find_word(&chars("abcd")), Some(0));
        assert_eq!(t.find_word(&chars("abcdefg")), Some(1));
        assert_eq!(t.find_word(&chars("abc")), None);
    }

    #[test]
    fn locus() {
        let lex = Lexicon::from_words(["AbCdeAa", "AbCdeBbbOo", "AbCdeBbbSss", "AbEfg"]);
        let t = CompactScoredTrie::build(&lex);
        let l = t.find_locus(&chars("AbC"), None);
        assert_eq!(l.depth, 3);
        assert_eq!(label(&t, l.node), "Cde");
        assert_eq!(l.offset, 2);
        let l = t.find_locus(&chars("AbEfg"), None);
        assert_eq!((l.depth, l.offset), (5, 0));
        assert_eq!(t.leaf(l.node), Some(3));
        assert_eq!(t.find_locus(&chars("xAb"), None), Locus { node: ROOT, offset: 0, depth: 0 });
        // resuming gives the same answer as starting over
        let ab = t.find_locus(&chars("Ab"), None);
        assert_eq!(t.find_locus(&chars("AbCdeB"), Some(ab)), t.find_locus(&chars("AbCdeB"), None));
        let stuck = t.find_locus(&chars("Abx"), None);
        assert_eq!(t.find_locus(&chars("AbxC"), Some(stuck)), t.find_locus(&chars("AbxC"), None));
    }

    #[test]
    fn score_updates() {
        let lex = Lexicon::from_scored([("abcd", 10), ("abce", 7), ("abcdefg", 5)]);
        let mut t = CompactScoredTrie::build(&lex);
        let before: Vec<u64> = (0..t.node_count() as NodeId).map(|v| t.score(v)).collect();
        assert_eq!(t.update_score(&chars("abce"), 2).unwrap(), 9);
        let after: Vec<u64> = (0..t.node_count() as NodeId).filter(|&v| t.leaf(v).is_none()).map(|v| t.score(v)).collect();
        let internal: Vec<u64> = (0..t.node_count() as NodeId).filter(|&v| t.leaf(v).is_none()).map(|v| before[v as usize]).collect();
        assert_eq!(after, internal);
        assert_eq!(t.update_score(&chars("abce"), 2).unwrap(), 11);
        assert_eq!(t.score(ROOT), 11);
        assert!(t.scores_consistent());
        assert!(matches!(t.update_score(&chars("zzz"), 1), Err(Error::NotFound(_))));
        assert!(matches!(t.update_score(&chars("abce"), 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn round_trip() {
        let lex = Lexicon::from_scored([("naïve", 3), ("naive", 1), ("nave", 9), ("ab", 0)]);
        let mut t = CompactScoredTrie::build(&lex);
        t.update_score(&chars("ab"), 40).unwrap();
        let mut w = Writer::new();
        t.encode(&mut w);
        let bytes = w.into_bytes();
        assert_eq!(CompactScoredTrie::decode(&mut Reader::new(&bytes)).unwrap(), t);
    }

    proptest! {
        #[test]
        fn structure_invariants(words in prop::collection::vec(("[abc]{2,7}", 0u64..20), 0..40), bumps in prop::collection::vec((0usize..40, 1u64..15), 0..20)) {
            let lex = Lexicon::from_scored(words);
            let mut t = CompactScoredTrie::build(&lex);
            prop_assert!(t.scores_consistent());
            for v in 1..t.node_count() as NodeId {
                let ch = t.children(v);
                // path compression: no internal node with a single child
                prop_assert!(t.leaf(v).is_some() || ch.len() >= 2);
            }
            for i in 0..t.len() {
                // spelling the root-to-leaf path gives the word back
                let mut s = Vec::new();
                let mut v = t.leaf_node[i];
                while let Some(p) = t.parent(v) {
                    s.splice(0..0, t.edge_label(v).iter().copied());
                    v = p;
                }
                prop_assert_eq!(&s[..], t.sorted_word(i));
                prop_assert_eq!(t.find_word(t.sorted_word(i)), Some(i));
                prop_assert_eq!(t.sorted_score(i), lex.score(t.sorted_id(i)));
            }
            for (i, d) in bumps {
                if t.is_empty() { break; }
                let w = t.sorted_word(i % t.len()).to_vec();
                t.update_score(&w, d).unwrap();
                prop_assert!(t.scores_consistent());
            }
        }
    }
}
