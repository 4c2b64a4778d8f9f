//! Ranked, paginated completion.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};

use super::trie::{CompactScoredTrie, NodeId, Pos};
use super::valid::{Method, PrefixSubstDict, ValidNodes};
use super::{Suggestion, SuggestionPage};

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Entry {
    score: u64,
    best: Reverse<u32>,
    node: Reverse<NodeId>,
}

/// Lazily yields the completions below a set of valid nodes in rank order:
/// the exact group, then the approximate group, each by descending score with
/// ties in lexicographic order. The queue is the continuation state, so a
/// later page picks up where the previous one stopped.
pub struct Ranker<'t> {
    trie: &'t CompactScoredTrie,
    heap: BinaryHeap<Entry>,
    exact: Option<NodeId>,
    approx: Vec<NodeId>,
    in_exact: bool,
    emitted: HashSet<u32>,
    peeked: Option<Suggestion>,
}

impl<'t> Ranker<'t> {
    pub fn new(trie: &'t CompactScoredTrie, valid: &ValidNodes) -> Self {
        let mut r = Self {
            trie,
            heap: BinaryHeap::new(),
            exact: valid.exact,
            approx: valid.approx.clone(),
            in_exact: true,
            emitted: HashSet::new(),
            peeked: None,
        };
        if let Some(v) = valid.exact {
            r.push(v);
        }
        r
    }

    fn push(&mut self, v: NodeId) {
        let (score, best) = self.trie.key(v);
        self.heap.push(Entry { score, best, node: Reverse(v) });
    }

    fn advance(&mut self) -> Option<Suggestion> {
        loop {
            let Some(e) = self.heap.pop() else {
                if !self.in_exact {
                    return None;
                }
                self.in_exact = false;
                for v in std::mem::take(&mut self.approx) {
                    self.push(v);
                }
                continue;
            };
            let v = e.node.0;
            if let Some(i) = self.trie.leaf(v) {
                if self.emitted.insert(i as u32) {
                    return Some(self.trie.suggestion(i, self.in_exact));
                }
                continue;
            }
            for &u in self.trie.children(v) {
                // the exact subtree was drained before this phase started
                if !self.in_exact && Some(u) == self.exact {
                    continue;
                }
                self.push(u);
            }
        }
    }

    pub fn has_more(&mut self) -> bool {
        if self.peeked.is_none() {
            self.peeked = self.advance();
        }
        self.peeked.is_some()
    }

    /// The next `k` suggestions; empty with `has_more == false` once exhausted.
    pub fn next_page(&mut self, k: usize) -> Result<SuggestionPage> {
        if k == 0 {
            return Err(Error::Parameter("page size must be at least 1".into()));
        }
        let suggestions: Vec<Suggestion> = self.by_ref().take(k).collect();
        let has_more = self.has_more();
        Ok(SuggestionPage { suggestions, has_more })
    }
}

impl Iterator for Ranker<'_> {
    type Item = Suggestion;

    fn next(&mut self) -> Option<Suggestion> {
        self.peeked.take().or_else(|| self.advance())
    }
}

impl CompactScoredTrie {
    /// Ranked completions of `q` with up to `max_errors` edits.
    pub fn ranker(&self, psd: Option<&PrefixSubstDict>, q: &[char], method: Method, max_errors: u8) -> Result<Ranker<'_>> {
        let v = self.valid_nodes(psd, q, method, max_errors)?;
        Ok(Ranker::new(self, &v))
    }

    /// First page of [`ranker`](Self::ranker).
    pub fn topk(&self, psd: Option<&PrefixSubstDict>, q: &[char], method: Method, max_errors: u8, k: usize) -> Result<SuggestionPage> {
        if k == 0 {
            return Err(Error::Parameter("page size must be at least 1".into()));
        }
        self.ranker(psd, q, method, max_errors)?.next_page(k)
    }
}

/// Keeps the previous query of one user so that a query extending it resumes
/// the prefix walk where it stopped instead of starting at the root.
#[derive(Clone, Debug, Default)]
pub struct Session {
    prev: Vec<char>,
    path: Vec<Pos>,
    resumed: bool,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether the last search reused the stored walk.
    pub fn resumed(&self) -> bool {
        self.resumed
    }

    /// Positions of the matched prefixes of `q`.
    pub fn locate(&mut self, trie: &CompactScoredTrie, q: &[char]) -> &[Pos] {
        self.resumed = !self.path.is_empty() && q.starts_with(&self.prev);
        if !self.resumed {
            self.path.clear();
        }
        trie.extend_path(&mut self.path, q);
        self.prev.clear();
        self.prev.extend_from_slice(q);
        &self.path
    }

    /// First page for `q`, identical to a search from the root.
    pub fn search_end_node(&mut self, trie: &CompactScoredTrie, psd: Option<&PrefixSubstDict>, q: &[char], method: Method, max_errors: u8, k: usize) -> Result<SuggestionPage> {
        if k == 0 {
            return Err(Error::Parameter("page size must be at least 1".into()));
        }
        let path = self.locate(trie, q);
        let v = trie.valid_nodes_on_path(psd, q, path, method, max_errors)?;
        Ranker::new(trie, &v).next_page(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autocomplete::DEFAULT_DEPTH;
    use crate::text::{chars, min_prefix_distance, Lexicon};
    use proptest::prelude::*;

    fn words(p: &SuggestionPage) -> Vec<(String, u64, bool)> {
        p.suggestions.iter().map(|s| (s.word.clone(), s.score, s.exact)).collect()
    }

    fn lex() -> Lexicon {
        Lexicon::from_scored([("abcd", 10), ("abce", 7), ("abcdefg", 5)])
    }

    #[test]
    fn pages() {
        let lex = lex();
        let t = CompactScoredTrie::build(&lex);
        let mut r = t.ranker(None, &chars("abc"), Method::Naive, 1).unwrap();
        let p = r.next_page(2).unwrap();
        assert_eq!(words(&p), [("abcd".into(), 10, true), ("abce".into(), 7, true)]);
        assert!(p.has_more);
        let p = r.next_page(2).unwrap();
        assert_eq!(words(&p), [("abcdefg".into(), 5, true)]);
        assert!(!p.has_more);
        let p = r.next_page(2).unwrap();
        assert!(p.suggestions.is_empty() && !p.has_more);
        assert!(r.next_page(0).is_err());
        assert!(t.topk(None, &chars("abc"), Method::Naive, 1, 0).is_err());
    }

    #[test]
    fn approximate_group() {
        let t = CompactScoredTrie::build(&lex());
        let p = t.topk(None, &chars("abx"), Method::Naive, 1, 3).unwrap();
        assert_eq!(
            words(&p),
            [("abcd".into(), 10, false), ("abce".into(), 7, false), ("abcdefg".into(), 5, false)]
        );
        assert!(!p.has_more);
    }

    #[test]
    fn exact_before_approximate_and_ties() {
        let lex = Lexicon::from_scored([("cab", 1), ("cat", 1), ("car", 1), ("cut", 50), ("ca", 1)]);
        let t = CompactScoredTrie::build(&lex);
        let all: Vec<_> = t.ranker(None, &chars("ca"), Method::Naive, 1).unwrap().collect();
        let got: Vec<_> = all.iter().map(|s| (s.word.as_str(), s.exact)).collect();
        assert_eq!(got, [("ca", true), ("cab", true), ("car", true), ("cat", true), ("cut", false)]);
    }

    #[test]
    fn score_updates_change_rank() {
        let mut t = CompactScoredTrie::build(&lex());
        let first = |t: &CompactScoredTrie| t.topk(None, &chars("abc"), Method::Naive, 1, 1).unwrap().suggestions[0].word.clone();
        assert_eq!(first(&t), "abcd");
        t.update_score(&chars("abcdefg"), 5).unwrap();
        // equal score: the lexicographically smaller word stays first
        assert_eq!(first(&t), "abcd");
        t.update_score(&chars("abcdefg"), 1).unwrap();
        assert_eq!(first(&t), "abcdefg");
    }

    #[test]
    fn session_resume() {
        let lex = Lexicon::from_words(["abc", "abd", "xyz", "xya"]);
        let t = CompactScoredTrie::build(&lex);
        let mut s = Session::new();
        let go = |s: &mut Session, q: &str| s.search_end_node(&t, None, &chars(q), Method::Naive, 1, 10).unwrap();
        let root = |q: &str| t.topk(None, &chars(q), Method::Naive, 1, 10).unwrap();
        assert_eq!(go(&mut s, "ab"), root("ab"));
        assert!(!s.resumed());
        assert_eq!(go(&mut s, "abc"), root("abc"));
        assert!(s.resumed());
        assert_eq!(go(&mut s, "abc"), root("abc"));
        assert!(s.resumed());
        assert_eq!(go(&mut s, "xy"), root("xy"));
        assert!(!s.resumed());
    }

    fn total_order(lex: &Lexicon, q: &[char]) -> Vec<(String, bool)> {
        let mut all: Vec<_> = (0..lex.len() as u32)
            .filter_map(|i| {
                let d = min_prefix_distance(q, lex.word(i));
                (d <= 1).then(|| (d != 0 || !lex.word(i).starts_with(q), lex.score(i), lex.word_string(i)))
            })
            .collect();
        all.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        all.into_iter().map(|(approx, _, w)| (w, !approx)).collect()
    }

    proptest! {
        #[test]
        fn pages_follow_total_order(entries in prop::collection::vec(("[abc]{2,6}", 0u64..5), 0..30), q in "[abcd]{0,6}", k in 1usize..5) {
            let lex = Lexicon::from_scored(entries);
            let t = CompactScoredTrie::build(&lex);
            let psd = PrefixSubstDict::build(&t, DEFAULT_DEPTH, 9).unwrap();
            let q = chars(&q);
            let want = total_order(&lex, &q);
            let mut reference = None;
            for m in Method::ALL {
                let mut r = t.ranker(Some(&psd), &q, m, 1).unwrap();
                let mut got = Vec::new();
                let mut pages = Vec::new();
                loop {
                    let p = r.next_page(k).unwrap();
                    got.extend(p.suggestions.iter().map(|s| (s.word.clone(), s.exact)));
                    let more = p.has_more;
                    pages.push(p);
                    if !more { break; }
                }
                prop_assert_eq!(&got, &want);
                match &reference {
                    None => reference = Some(pages),
                    Some(r) => prop_assert_eq!(r, &pages),
                }
            }
        }

        #[test]
        fn session_matches_root(words in prop::collection::vec("[abc]{2,6}", 0..20), qs in prop::collection::vec("[abc]{0,5}", 1..10)) {
            let lex = Lexicon::from_words(&words);
            let t = CompactScoredTrie::build(&lex);
            let mut s = Session::new();
            let mut last_depth = 0;
            let mut prev: Vec<char> = Vec::new();
            for q in qs {
                let q = chars(&q);
                let a = s.search_end_node(&t, None, &q, Method::Naive, 1, 4).unwrap();
                let b = t.topk(None, &q, Method::Naive, 1, 4).unwrap();
                prop_assert_eq!(a, b);
                let depth = s.locate(&t, &q).len();
                if q.starts_with(&prev) {
                    prop_assert!(depth >= last_depth);
                }
                last_depth = depth;
                prev = q;
            }
        }
    }
}
