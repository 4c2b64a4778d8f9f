//! Trie plus reverse trie for distance-1 search.
//!
//! For every possible error position the query splits into a prefix `P1`,
//! matched from the root of the forward trie, and a suffix `P2`, matched from
//! the root of the trie of mirrored words. A word with one error at that
//! position exists iff the two end nodes agree on the character in between and
//! the rest of the word completes on both sides. Three strategies decide this:
//!
//! * `trt_ci`: intersect the outgoing characters of both nodes, then finish the
//!   shorter of `P1`/`P2` by walking it.
//! * `trt_wni`: intersect the word numbers below both nodes.
//! * `trt_cwni`: intersect characters first, then word numbers below the
//!   matching children only.

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::text::{Lexicon, WordId, EMPTY};

pub type NodeId = u32;

pub const ROOT: NodeId = 0;

/// Set of alphabet ranks stored as a bitmap.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CharSet(Vec<u64>);

impl CharSet {
    pub fn from_ranks(ranks: impl IntoIterator<Item = u32>, sigma: usize) -> Self {
        let mut s = CharSet(vec![0; sigma.div_ceil(64).max(1)]);
        for r in ranks {
            s.0[r as usize / 64] |= 1 << (r % 64);
        }
        s
    }

    pub fn contains(&self, r: u32) -> bool {
        self.0.get(r as usize / 64).is_some_and(|w| w >> (r % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        bit_iter(&self.0)
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

fn bit_iter(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros();
            w &= w - 1;
            Some(k as u32 * 64 + b)
        })
    })
}

pub fn intersect_chars(a: &CharSet, b: &CharSet) -> CharSet {
    CharSet(a.0.iter().zip(&b.0).map(|(x, y)| x & y).collect())
}

/// Scratch bit vector over word ids; cleared position by position after use.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    bits: Vec<u64>,
    touched: Vec<u32>,
}

impl Scratch {
    pub fn new(d: usize) -> Self {
        Self { bits: vec![0; d.div_ceil(64)], touched: Vec::new() }
    }

    fn ensure(&mut self, d: usize) {
        if self.bits.len() < d.div_ceil(64) {
            self.bits.resize(d.div_ceil(64), 0);
        }
    }

    fn mark(&mut self, id: WordId) {
        self.bits[id as usize / 64] |= 1 << (id % 64);
        self.touched.push(id);
    }

    fn test(&self, id: WordId) -> bool {
        self.bits[id as usize / 64] >> (id % 64) & 1 == 1
    }

    fn clear(&mut self) {
        for id in self.touched.drain(..) {
            self.bits[id as usize / 64] = 0;
        }
    }

    pub fn is_clear(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

/// Ids present in both slices: marks `a`, probes `b`, then resets the marks.
pub fn intersect_word_numbers(a: &[WordId], b: &[WordId], scratch: &mut Scratch) -> Vec<WordId> {
    let d = a.iter().chain(b).max().map_or(0, |&m| m as usize + 1);
    scratch.ensure(d);
    for &id in a {
        scratch.mark(id);
    }
    let out = b.iter().copied().filter(|&id| scratch.test(id)).collect();
    scratch.clear();
    out
}

/// One direction, frozen in depth-first order with sorted children.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Trie {
    child_start: Vec<u32>,
    child_rank: Vec<u32>,
    child_node: Vec<NodeId>,
    terminal: Vec<WordId>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    leaf_order: Vec<WordId>,
    charsets: Vec<u64>,
}

impl Trie {
    /// `words` are rank sequences with their ids.
    fn build(mut words: Vec<(Vec<u32>, WordId)>, stride: usize) -> Self {
        words.sort_unstable();
        let mut parent: Vec<NodeId> = vec![EMPTY];
        let mut terminal = vec![EMPTY];
        let mut lo = vec![0u32];
        let mut edges: Vec<(NodeId, u32, NodeId)> = Vec::new();
        let mut path: Vec<NodeId> = vec![ROOT];
        let mut leaf_order = Vec::with_capacity(words.len());
        let mut prev: &[u32] = &[];
        for (w, id) in &words {
            let l = prev.iter().zip(w).take_while(|(a, b)| a == b).count();
            path.truncate(l + 1);
            for &r in &w[l..] {
                let n = parent.len() as NodeId;
                let p = *path.last().unwrap();
                parent.push(p);
                terminal.push(EMPTY);
                lo.push(leaf_order.len() as u32);
                edges.push((p, r, n));
                path.push(n);
            }
            terminal[*path.last().unwrap() as usize] = *id;
            leaf_order.push(*id);
            prev = w;
        }
        let n = parent.len();
        let mut count = vec![0u32; n];
        for v in (0..n).rev() {
            count[v] += u32::from(terminal[v] != EMPTY);
            if v > 0 {
                let p = parent[v] as usize;
                count[p] += count[v];
            }
        }
        let hi = (0..n).map(|v| lo[v] + count[v]).collect();
        let mut child_start = vec![0u32; n + 1];
        for &(p, _, _) in &edges {
            child_start[p as usize + 1] += 1;
        }
        for v in 0..n {
            child_start[v + 1] += child_start[v];
        }
        let mut fill = child_start.clone();
        let mut child_rank = vec![0; edges.len()];
        let mut child_node = vec![0; edges.len()];
        let mut charsets = vec![0u64; n * stride];
        for &(p, r, c) in &edges {
            let k = fill[p as usize] as usize;
            fill[p as usize] += 1;
            child_rank[k] = r;
            child_node[k] = c;
            charsets[p as usize * stride + r as usize / 64] |= 1 << (r % 64);
        }
        Self { child_start, child_rank, child_node, terminal, lo, hi, leaf_order, charsets }
    }

    fn nodes(&self) -> usize {
        self.terminal.len()
    }

    #[inline]
    fn children(&self, v: NodeId) -> impl Iterator<Item = (u32, NodeId)> + '_ {
        let (a, b) = (self.child_start[v as usize] as usize, self.child_start[v as usize + 1] as usize);
        self.child_rank[a..b].iter().copied().zip(self.child_node[a..b].iter().copied())
    }

    #[inline]
    fn child(&self, v: NodeId, r: u32) -> Option<NodeId> {
        let (a, b) = (self.child_start[v as usize] as usize, self.child_start[v as usize + 1] as usize);
        self.child_rank[a..b].binary_search(&r).ok().map(|k| self.child_node[a + k])
    }

    #[inline]
    fn charset(&self, v: NodeId, stride: usize) -> &[u64] {
        &self.charsets[v as usize * stride..(v as usize + 1) * stride]
    }

    #[inline]
    fn term(&self, v: NodeId) -> Option<WordId> {
        let t = self.terminal[v as usize];
        (t != EMPTY).then_some(t)
    }

    fn range(&self, v: NodeId) -> &[WordId] {
        &self.leaf_order[self.lo[v as usize] as usize..self.hi[v as usize] as usize]
    }

    /// Follows `ranks` from `v`; `None` as soon as an edge is missing.
    #[inline]
    fn walk(&self, mut v: NodeId, ranks: impl Iterator<Item = Option<u32>>, steps: &mut u64) -> Option<NodeId> {
        for r in ranks {
            *steps += 1;
            v = self.child(v, r?)?;
        }
        Some(v)
    }

    fn encode(&self, w: &mut Writer) {
        w.u32s(&self.child_start);
        w.u32s(&self.child_rank);
        w.u32s(&self.child_node);
        w.u32s(&self.terminal);
        w.u32s(&self.lo);
        w.u32s(&self.hi);
        w.u32s(&self.leaf_order);
        w.u64s(&self.charsets);
    }

    fn decode(r: &mut Reader, stride: usize, d: usize, sigma: usize) -> Result<Self> {
        let t = Self {
            child_start: r.u32s()?,
            child_rank: r.u32s()?,
            child_node: r.u32s()?,
            terminal: r.u32s()?,
            lo: r.u32s()?,
            hi: r.u32s()?,
            leaf_order: r.u32s()?,
            charsets: r.u64s()?,
        };
        let n = t.terminal.len();
        let e = t.child_rank.len();
        let ok = n >= 1
            && t.child_start.len() == n + 1
            && t.child_start.windows(2).all(|p| p[0] <= p[1])
            && t.child_start[n] as usize == e
            && t.child_node.len() == e
            && t.child_node.iter().all(|&c| (c as usize) < n)
            && t.child_rank.iter().all(|&r| (r as usize) < sigma)
            && t.lo.len() == n
            && t.hi.len() == n
            && t.lo.iter().zip(&t.hi).all(|(&a, &b)| a <= b && b as usize <= t.leaf_order.len())
            && t.leaf_order.len() == d
            && t.leaf_order.iter().chain(t.terminal.iter().filter(|&&x| x != EMPTY)).all(|&x| (x as usize) < d)
            && t.charsets.len() == n * stride;
        if !ok {
            return Err(Error::Format("trie arrays inconsistent".into()));
        }
        Ok(t)
    }
}

/// Work counters of one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Edges followed plus children and word numbers examined.
    pub steps: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Chars,
    Numbers,
    CharsThenNumbers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidirectionalTrie {
    alphabet: Vec<char>,
    stride: usize,
    lens: Vec<u32>,
    fwd: Trie,
    bwd: Trie,
}

impl BidirectionalTrie {
    pub fn build(lex: &Lexicon) -> Self {
        let alphabet = lex.alphabet().to_vec();
        let rank = |c: char| alphabet.binary_search(&c).unwrap() as u32;
        let stride = alphabet.len().div_ceil(64).max(1);
        let fwd_words = lex.words().enumerate().map(|(i, w)| (w.iter().map(|&c| rank(c)).collect(), i as WordId)).collect();
        let bwd_words = lex.words().enumerate().map(|(i, w)| (w.iter().rev().map(|&c| rank(c)).collect(), i as WordId)).collect();
        let lens = lex.words().map(|w| w.len() as u32).collect();
        let fwd = Trie::build(fwd_words, stride);
        let bwd = Trie::build(bwd_words, stride);
        Self { alphabet, stride, lens, fwd, bwd }
    }

    pub fn len(&self) -> usize {
        self.lens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lens.is_empty()
    }

    /// Node counts of the forward and backward tries.
    pub fn node_counts(&self) -> (usize, usize) {
        (self.fwd.nodes(), self.bwd.nodes())
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    fn ranks(&self, q: &[char]) -> Vec<Option<u32>> {
        q.iter().map(|c| self.alphabet.binary_search(c).ok().map(|r| r as u32)).collect()
    }

    /// Forward leaf range of `v` as word ids in left-to-right order.
    pub fn leaf_range(&self, v: NodeId) -> &[WordId] {
        self.fwd.range(v)
    }

    /// Backward leaf range of `v`.
    pub fn reverse_leaf_range(&self, v: NodeId) -> &[WordId] {
        self.bwd.range(v)
    }

    pub fn outgoing(&self, v: NodeId) -> CharSet {
        CharSet(self.fwd.charset(v, self.stride).to_vec())
    }

    /// Follows `s` from the forward root; `None` if it leaves the trie.
    pub fn forward_node(&self, s: &str) -> Option<NodeId> {
        let q: Vec<char> = s.chars().collect();
        self.fwd.walk(ROOT, self.ranks(&q).into_iter(), &mut 0)
    }

    /// Follows `s` (already mirrored) from the backward root.
    pub fn backward_node(&self, s: &str) -> Option<NodeId> {
        let q: Vec<char> = s.chars().collect();
        self.bwd.walk(ROOT, self.ranks(&q).into_iter(), &mut 0)
    }

    pub fn forward_children(&self, v: NodeId) -> Vec<(char, NodeId)> {
        self.fwd.children(v).map(|(r, c)| (self.alphabet[r as usize], c)).collect()
    }

    pub fn forward_terminal(&self, v: NodeId) -> Option<WordId> {
        self.fwd.term(v)
    }

    pub fn backward_terminal(&self, v: NodeId) -> Option<WordId> {
        self.bwd.term(v)
    }

    /// Deepest node matching a prefix of `q`, and the matched length.
    pub fn exact_prefix_walk(&self, q: &[char]) -> (NodeId, usize) {
        let mut v = ROOT;
        for (i, r) in self.ranks(q).into_iter().enumerate() {
            match r.and_then(|r| self.fwd.child(v, r)) {
                Some(c) => v = c,
                None => return (v, i),
            }
        }
        (v, q.len())
    }

    pub fn scratch(&self) -> Scratch {
        Scratch::new(self.len())
    }

    pub fn trt_ci(&self, q: &[char]) -> Vec<WordId> {
        self.trt_ci_stats(q).0
    }

    pub fn trt_ci_stats(&self, q: &[char]) -> (Vec<WordId>, QueryStats) {
        let mut sc = Scratch::default();
        self.search(q, Mode::Chars, &mut sc)
    }

    pub fn trt_wni(&self, q: &[char], scratch: &mut Scratch) -> Vec<WordId> {
        self.search(q, Mode::Numbers, scratch).0
    }

    pub fn trt_cwni(&self, q: &[char], scratch: &mut Scratch) -> Vec<WordId> {
        self.search(q, Mode::CharsThenNumbers, scratch).0
    }

    fn search(&self, q: &[char], strategy: Mode, sc: &mut Scratch) -> (Vec<WordId>, QueryStats) {
        sc.ensure(self.len());
        let r = self.ranks(q);
        let m = q.len();
        let mut steps = 0u64;
        // fw[i]: node for q[..i]; bw[j]: node for the mirrored suffix of length j
        let mut fw = vec![ROOT];
        for &x in &r {
            steps += 1;
            match x.and_then(|x| self.fwd.child(*fw.last().unwrap(), x)) {
                Some(c) => fw.push(c),
                None => break,
            }
        }
        let mut bw = vec![ROOT];
        for &x in r.iter().rev() {
            steps += 1;
            match x.and_then(|x| self.bwd.child(*bw.last().unwrap(), x)) {
                Some(c) => bw.push(c),
                None => break,
            }
        }
        let (lf, lb) = (fw.len() - 1, bw.len() - 1);
        let mut out = Vec::new();
        if lf == m {
            if let Some(id) = self.fwd.term(fw[m]) {
                out.push(id);
            }
        }
        let mut ctx = Ctx { t: self, r: &r, sc, steps, out };
        for i in 0..=m {
            if i > lf {
                break;
            }
            // insertion between q[..i] and q[i..]
            if m - i <= lb {
                ctx.one_char(strategy, fw[i], bw[m - i], i, i, None);
            }
            if i < m && m - i - 1 <= lb {
                // substitution of q[i]
                ctx.one_char(strategy, fw[i], bw[m - i - 1], i, i + 1, r[i]);
                // deletion of q[i]
                if i == 0 || r[i] != r[i - 1] || r[i].is_none() {
                    ctx.join(strategy, fw[i], bw[m - i - 1], i, i + 1);
                }
            }
        }
        let Ctx { mut out, steps, .. } = ctx;
        out.sort_unstable();
        out.dedup();
        (out, QueryStats { steps })
    }

    pub fn encode(&self, w: &mut Writer) {
        w.u32s(&self.alphabet.iter().map(|&c| c as u32).collect::<Vec<_>>());
        w.u32s(&self.lens);
        self.fwd.encode(w);
        self.bwd.encode(w);
    }

    pub fn decode(r: &mut Reader) -> Result<Self> {
        let alphabet = r
            .u32s()?
            .into_iter()
            .map(|c| char::from_u32(c).ok_or_else(|| Error::Format("alphabet symbol".into())))
            .collect::<Result<Vec<_>>>()?;
        let lens = r.u32s()?;
        let stride = alphabet.len().div_ceil(64).max(1);
        let fwd = Trie::decode(r, stride, lens.len(), alphabet.len())?;
        let bwd = Trie::decode(r, stride, lens.len(), alphabet.len())?;
        Ok(Self { alphabet, stride, lens, fwd, bwd })
    }
}

struct Ctx<'a> {
    t: &'a BidirectionalTrie,
    r: &'a [Option<u32>],
    sc: &'a mut Scratch,
    steps: u64,
    out: Vec<WordId>,
}

impl Ctx<'_> {
    /// Words `q[..p1] c q[s2..]` for any character `c` other than `exclude`.
    /// `v` ends `q[..p1]` in the forward trie, `w` ends the mirrored `q[s2..]`.
    fn one_char(&mut self, strategy: Mode, v: NodeId, w: NodeId, p1: usize, s2: usize, exclude: Option<u32>) {
        let t = self.t;
        let p2 = self.r.len() - s2;
        if p2 == 0 {
            for (x, c) in t.fwd.children(v) {
                self.steps += 1;
                if Some(x) != exclude {
                    if let Some(id) = t.fwd.term(c) {
                        self.out.push(id);
                    }
                }
            }
            return;
        }
        if p1 == 0 {
            for (x, c) in t.bwd.children(w) {
                self.steps += 1;
                if Some(x) != exclude {
                    if let Some(id) = t.bwd.term(c) {
                        self.out.push(id);
                    }
                }
            }
            return;
        }
        let len = (p1 + p2 + 1) as u32;
        match strategy {
            Mode::Numbers => self.numbers(v, w, len),
            Mode::Chars | Mode::CharsThenNumbers => {
                let common = intersect_chars(
                    &CharSet(t.fwd.charset(v, t.stride).to_vec()),
                    &CharSet(t.bwd.charset(w, t.stride).to_vec()),
                );
                for x in common.iter() {
                    self.steps += 1;
                    if Some(x) == exclude {
                        continue;
                    }
                    let vc = t.fwd.child(v, x).unwrap();
                    let wc = t.bwd.child(w, x).unwrap();
                    if strategy == Mode::CharsThenNumbers {
                        self.numbers(vc, wc, len);
                    } else {
                        self.finish(vc, wc, p1, s2);
                    }
                }
            }
        }
    }

    /// The word `q[..p1] q[s2..]`.
    fn join(&mut self, strategy: Mode, v: NodeId, w: NodeId, p1: usize, s2: usize) {
        let t = self.t;
        let p2 = self.r.len() - s2;
        if p2 == 0 {
            if let Some(id) = t.fwd.term(v) {
                self.out.push(id);
            }
            return;
        }
        if p1 == 0 {
            if let Some(id) = t.bwd.term(w) {
                self.out.push(id);
            }
            return;
        }
        match strategy {
            Mode::Chars => self.finish(v, w, p1, s2),
            _ => self.numbers(v, w, (p1 + p2) as u32),
        }
    }

    /// Completes the shorter side: walks `q[s2..]` forward from `v` or the
    /// mirrored `q[..p1]` backward from `w`, then checks for a word end.
    fn finish(&mut self, v: NodeId, w: NodeId, p1: usize, s2: usize) {
        let t = self.t;
        let p2 = self.r.len() - s2;
        let hit = if p1 > p2 {
            t.fwd.walk(v, self.r[s2..].iter().copied(), &mut self.steps).and_then(|n| t.fwd.term(n))
        } else {
            t.bwd.walk(w, self.r[..p1].iter().rev().copied(), &mut self.steps).and_then(|n| t.bwd.term(n))
        };
        if let Some(id) = hit {
            self.out.push(id);
        }
    }

    /// Word ids below both `v` and `w` with the given length.
    fn numbers(&mut self, v: NodeId, w: NodeId, len: u32) {
        let t = self.t;
        let (a, b) = (t.fwd.range(v), t.bwd.range(w));
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for &id in small {
            if t.lens[id as usize] == len {
                self.sc.mark(id);
            }
        }
        self.steps += (small.len() + large.len()) as u64;
        if !self.sc.touched.is_empty() {
            for &id in large {
                if self.sc.test(id) {
                    self.out.push(id);
                }
            }
        }
        self.sc.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{chars, oracle_search};
    use proptest::prelude::*;

    fn all(t: &BidirectionalTrie, q: &str) -> [Vec<WordId>; 3] {
        let q = chars(q);
        let mut sc = t.scratch();
        let res = [t.trt_ci(&q), t.trt_wni(&q, &mut sc), t.trt_cwni(&q, &mut sc)];
        assert!(sc.is_clear());
        res
    }

    fn names(lex: &Lexicon, ids: &[WordId]) -> Vec<String> {
        let mut v: Vec<String> = ids.iter().map(|&i| lex.word_string(i)).collect();
        v.sort();
        v
    }

    #[test]
    fn structure() {
        let lex = Lexicon::from_words(["cat"]);
        let t = BidirectionalTrie::build(&lex);
        assert!(t.forward_node("cat").is_some_and(|v| t.forward_terminal(v) == Some(0)));
        assert!(t.backward_node("tac").is_some_and(|v| t.backward_terminal(v) == Some(0)));
        assert_eq!(t.node_counts(), (4, 4));

        let lex = Lexicon::from_words(["ab", "abc"]);
        let t = BidirectionalTrie::build(&lex);
        let ab = t.forward_node("ab").unwrap();
        assert_eq!(t.forward_terminal(ab), Some(0));
        assert_eq!(t.node_counts().0, 4);
        assert_eq!(t.leaf_range(ROOT), &[0, 1]);
        assert_eq!(t.leaf_range(ab), &[0, 1]);
    }

    #[test]
    fn prefix_walk() {
        let t = BidirectionalTrie::build(&Lexicon::from_words(["cat"]));
        let (v, l) = t.exact_prefix_walk(&chars("cut"));
        assert_eq!(l, 1);
        assert_eq!(Some(v), t.forward_node("c"));
        assert_eq!(t.exact_prefix_walk(&chars("cat")).1, 3);
        assert_eq!(t.exact_prefix_walk(&chars("xyz")), (ROOT, 0));
    }

    #[test]
    fn search_examples() {
        let lex = Lexicon::from_words(["cat", "cut", "car"]);
        let t = BidirectionalTrie::build(&lex);
        for r in all(&t, "cxt") {
            assert_eq!(names(&lex, &r), ["cat", "cut"]);
        }
        for r in all(&t, "cat") {
            assert_eq!(names(&lex, &r), ["car", "cat", "cut"]);
        }
        let lex = Lexicon::from_words(["cat"]);
        let t = BidirectionalTrie::build(&lex);
        for r in all(&t, "catzz") {
            assert!(r.is_empty());
        }
    }

    #[test]
    fn intersections() {
        let s = |v: &[u32]| CharSet::from_ranks(v.iter().copied(), 70);
        assert_eq!(intersect_chars(&s(&[0, 1, 2]), &s(&[1, 2, 3])), s(&[1, 2]));
        assert!(intersect_chars(&s(&[5, 66]), &s(&[])).is_empty());
        assert_eq!(intersect_chars(&s(&[5, 66]), &s(&[66, 69])).iter().collect::<Vec<_>>(), [66]);
        let mut sc = Scratch::new(10);
        assert_eq!(intersect_word_numbers(&[1, 2, 3], &[3, 4], &mut sc), [3]);
        assert!(intersect_word_numbers(&[1, 2], &[3, 4], &mut sc).is_empty());
        assert!(sc.is_clear());
    }

    #[test]
    fn round_trip() {
        let lex = Lexicon::from_words(["naïve", "naive", "nave", "ab"]);
        let t = BidirectionalTrie::build(&lex);
        let mut w = Writer::new();
        t.encode(&mut w);
        let bytes = w.into_bytes();
        let back = BidirectionalTrie::decode(&mut Reader::new(&bytes)).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.trt_ci(&chars("naxve")), [0, 1, 2]);
    }

    fn lexicon() -> impl Strategy<Value = Vec<String>> {
        prop::collection::vec("[abcd]{2,6}", 0..30)
    }

    proptest! {
        #[test]
        fn agrees_with_oracle(words in lexicon(), qs in prop::collection::vec("[abcde]{0,7}", 1..20)) {
            let lex = Lexicon::from_words(&words);
            let t = BidirectionalTrie::build(&lex);
            let mut sc = t.scratch();
            for q in qs {
                let q = chars(&q);
                let want = oracle_search(&lex, &q, 1);
                let (got, stats) = t.trt_ci_stats(&q);
                prop_assert_eq!(&got, &want);
                prop_assert_eq!(&t.trt_wni(&q, &mut sc), &want);
                prop_assert_eq!(&t.trt_cwni(&q, &mut sc), &want);
                let (sigma, m) = (t.sigma() as u64, q.len() as u64);
                prop_assert!(stats.steps <= 3 * sigma.max(1) * (m + 1) * (m + 1) + 2 * m + 2);
            }
        }

        #[test]
        fn order_independent(mut words in lexicon(), q in "[abcd]{0,7}") {
            let lex = Lexicon::from_words(&words);
            words.reverse();
            let rev = Lexicon::from_words(&words);
            let q = chars(&q);
            let a = names(&lex, &BidirectionalTrie::build(&lex).trt_ci(&q));
            let b = names(&rev, &BidirectionalTrie::build(&rev).trt_ci(&q));
            prop_assert_eq!(a, b);
        }
    }
}
