//! Top-k completion of a prefix typed with at most one error.
//!
//! Words are sorted by code point and turned into a path-compressed trie from
//! their LCP array. Every node carries the best score below it, so completions
//! come out of a priority queue in rank order: first the words extending the
//! query itself, then the words reached through a one-error variant of it.

mod rank;
mod trie;
mod valid;

pub use rank::{Ranker, Session};
pub use trie::{CompactScoredTrie, Locus, NodeId, Pos, ROOT};
pub use valid::{Method, PrefixSubstDict, ValidNodes, DEFAULT_DEPTH, SL_LEVELS};

use crate::text::{Lexicon, WordId};

/// One completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suggestion {
    pub id: WordId,
    pub word: String,
    pub score: u64,
    /// The word starts with the query itself.
    pub exact: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuggestionPage {
    pub suggestions: Vec<Suggestion>,
    pub has_more: bool,
}

/// `values[i]` is the length of the longest common prefix of words `i` and `i + 1`.
pub fn lcp_array<W: AsRef<[char]>>(sorted: &[W]) -> Vec<usize> {
    sorted
        .windows(2)
        .map(|p| p[0].as_ref().iter().zip(p[1].as_ref()).take_while(|(a, b)| a == b).count())
        .collect()
}

pub fn prefix_sum(xs: &[u64]) -> Vec<u64> {
    xs.iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Lexicon ids in code-point order of their words, and the LCP array of that order.
pub fn sort_and_lcp(lex: &Lexicon) -> (Vec<WordId>, Vec<usize>) {
    let mut order: Vec<WordId> = (0..lex.len() as WordId).collect();
    order.sort_unstable_by(|&a, &b| lex.word(a).cmp(lex.word(b)));
    let words: Vec<&[char]> = order.iter().map(|&i| lex.word(i)).collect();
    let lcp = lcp_array(&words);
    (order, lcp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::chars;

    #[test]
    fn lcp_example() {
        let lex = Lexicon::from_words(["AbEfg", "AbCdeBbbSss", "AbCdeAa", "AbCdeBbbOo"]);
        let (order, lcp) = sort_and_lcp(&lex);
        let words: Vec<String> = order.iter().map(|&i| lex.word_string(i)).collect();
        assert_eq!(words, ["AbCdeAa", "AbCdeBbbOo", "AbCdeBbbSss", "AbEfg"]);
        assert_eq!(lcp, [5, 8, 2]);
        assert!(lcp_array(&[chars("word")]).is_empty());
    }

    #[test]
    fn prefix_sum_example() {
        assert_eq!(prefix_sum(&[1, 1, 1, 2, 5, 5, 5]), [1, 2, 3, 5, 10, 15, 20]);
        assert!(prefix_sum(&[]).is_empty());
    }
}
