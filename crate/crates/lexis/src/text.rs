//! Word model, lexicon ingestion, reference distances and brute-force oracles.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Wildcard symbol. Sits above the last Unicode scalar value so it can never
/// collide with a real character.
pub const JOKER: u32 = 0x11_0000;

/// Marks an empty cell in symbol tables.
pub const EMPTY: u32 = u32::MAX;

pub type WordId = u32;

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

pub fn to_string(w: &[char]) -> String {
    w.iter().collect()
}

/// Distinct words with scores. Ids are dense and follow insertion order.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    words: Vec<Box<[char]>>,
    scores: Vec<u64>,
    ids: HashMap<Box<[char]>, WordId>,
    n: usize,
    alphabet: Vec<char>,
}

/// Outcome of adding one entry to a lexicon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Added {
    New(WordId),
    Duplicate(WordId),
    TooShort,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words<S: AsRef<str>>(words: impl IntoIterator<Item = S>) -> Self {
        let mut lex = Self::new();
        for w in words {
            lex.add(&chars(w.as_ref()), 0);
        }
        lex
    }

    pub fn from_scored<S: AsRef<str>>(entries: impl IntoIterator<Item = (S, u64)>) -> Self {
        let mut lex = Self::new();
        for (w, s) in entries {
            lex.add(&chars(w.as_ref()), s);
        }
        lex
    }

    /// Parses a dictionary in `word` / `word#score` lines.
    /// Returns the lexicon and one diagnostic per skipped line.
    pub fn parse(text: &str) -> Result<(Self, Vec<String>)> {
        let mut lex = Self::new();
        let mut diags = Vec::new();
        for (no, raw) in text.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                continue;
            }
            let (word, score) = parse_line(line).map_err(|msg| Error::Parse { line: no + 1, msg })?;
            let w = chars(word);
            match lex.add(&w, score) {
                Added::New(_) => {}
                Added::Duplicate(_) => {
                    log::warn!("line {}: duplicate word {:?} skipped", no + 1, word);
                    diags.push(format!("line {}: duplicate word {:?} skipped", no + 1, word));
                }
                Added::TooShort => {
                    log::warn!("line {}: word {:?} shorter than 2 skipped", no + 1, word);
                    diags.push(format!("line {}: word {:?} shorter than 2 skipped", no + 1, word));
                }
            }
        }
        Ok((lex, diags))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, Vec<String>)> {
        let bytes = fs::read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("not UTF-8: {e}"),
        })?;
        Self::parse(&text)
    }

    /// Adds a word. Words shorter than two characters are refused.
    pub fn add(&mut self, w: &[char], score: u64) -> Added {
        if w.len() < 2 {
            return Added::TooShort;
        }
        if let Some(&id) = self.ids.get(w) {
            return Added::Duplicate(id);
        }
        let id = self.words.len() as WordId;
        let boxed: Box<[char]> = w.into();
        self.ids.insert(boxed.clone(), id);
        self.words.push(boxed);
        self.scores.push(score);
        self.n += w.len();
        for &c in w {
            if let Err(p) = self.alphabet.binary_search(&c) {
                self.alphabet.insert(p, c);
            }
        }
        Added::New(id)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Total number of characters over all words.
    pub fn total_chars(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    /// Sorted distinct characters.
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn word(&self, id: WordId) -> &[char] {
        &self.words[id as usize]
    }

    pub fn word_string(&self, id: WordId) -> String {
        to_string(self.word(id))
    }

    pub fn score(&self, id: WordId) -> u64 {
        self.scores[id as usize]
    }

    pub fn set_score(&mut self, id: WordId, score: u64) {
        self.scores[id as usize] = score;
    }

    pub fn id_of(&self, w: &[char]) -> Option<WordId> {
        self.ids.get(w).copied()
    }

    pub fn words(&self) -> impl ExactSizeIterator<Item = &[char]> + '_ {
        self.words.iter().map(|w| &w[..])
    }

    /// Serializes back to `word#score` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (w, s) in self.words.iter().zip(&self.scores) {
            out.extend(w.iter());
            if *s > 0 || w.contains(&'#') {
                out.push('#');
                out.push_str(&s.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Splits `word#123` into word and score. Only the last `#` followed by
/// digits up to the end of line acts as separator.
pub fn parse_line(line: &str) -> std::result::Result<(&str, u64), String> {
    if let Some(p) = line.rfind('#') {
        let tail = &line[p + 1..];
        if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
            let word = &line[..p];
            if word.is_empty() {
                return Err("score without a word".into());
            }
            let score = tail.parse::<u64>().map_err(|_| format!("score {tail} out of range"))?;
            return Ok((word, score));
        }
    }
    Ok((line, 0))
}

pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Full dynamic-programming matrix, `m[i][j]` = distance of `a[..i]` to `b[..j]`.
pub fn levenshtein_matrix(a: &[char], b: &[char]) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0; b.len() + 1]; a.len() + 1];
    for (i, row) in m.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        m[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = m[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            m[i][j] = sub.min(m[i - 1][j] + 1).min(m[i][j - 1] + 1);
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    Keep(char),
    Substitute(char, char),
    Delete(char),
    Insert(char),
}

/// One optimal edit script from `a` to `b`, recovered from the full matrix.
pub fn edit_script(a: &[char], b: &[char]) -> Vec<EditOp> {
    let m = levenshtein_matrix(a, b);
    let (mut i, mut j) = (a.len(), b.len());
    let mut ops = Vec::new();
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && m[i][j] == m[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]) {
            ops.push(if a[i - 1] == b[j - 1] {
                EditOp::Keep(a[i - 1])
            } else {
                EditOp::Substitute(a[i - 1], b[j - 1])
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && m[i][j] == m[i - 1][j] + 1 {
            ops.push(EditOp::Delete(a[i - 1]));
            i -= 1;
        } else {
            ops.push(EditOp::Insert(b[j - 1]));
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

pub fn hamming(a: &[char], b: &[char]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Length(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Damerau-Levenshtein distance with unrestricted adjacent transpositions.
pub fn damerau(a: &[char], b: &[char]) -> usize {
    let (la, lb) = (a.len(), b.len());
    let inf = la + lb;
    let w = lb + 2;
    let mut d = vec![0usize; (la + 2) * w];
    d[0] = inf;
    for i in 0..=la {
        d[(i + 1) * w] = inf;
        d[(i + 1) * w + 1] = i;
    }
    for j in 0..=lb {
        d[j + 1] = inf;
        d[w + j + 1] = j;
    }
    let mut last_row: HashMap<char, usize> = HashMap::new();
    for i in 1..=la {
        let mut last_col = 0;
        for j in 1..=lb {
            let k = last_row.get(&b[j - 1]).copied().unwrap_or(0);
            let l = last_col;
            let cost = if a[i - 1] == b[j - 1] {
                last_col = j;
                0
            } else {
                1
            };
            let v = (d[i * w + j] + cost)
                .min(d[(i + 1) * w + j] + 1)
                .min(d[i * w + j + 1] + 1)
                .min(d[k * w + l] + (i - k - 1) + 1 + (j - l - 1));
            d[(i + 1) * w + j + 1] = v;
        }
        last_row.insert(a[i - 1], i);
    }
    d[(la + 1) * w + lb + 1]
}

/// Smallest distance between `q` and any prefix of `w`, the empty prefix included.
pub fn min_prefix_distance(q: &[char], w: &[char]) -> usize {
    // rows run over q, so the last row holds lev(q, w[..j]) for every j
    let mut prev: Vec<usize> = (0..=w.len()).collect();
    let mut cur = vec![0; w.len() + 1];
    for (i, &cq) in q.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cw) in w.iter().enumerate() {
            let sub = prev[j] + usize::from(cq != cw);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev.into_iter().min().unwrap_or(0)
}

/// Linear scan: ids of words within distance `k` of `q`, ascending.
pub fn oracle_search(lex: &Lexicon, q: &[char], k: usize) -> Vec<WordId> {
    (0..lex.len() as WordId)
        .filter(|&id| {
            let w = lex.word(id);
            w.len().abs_diff(q.len()) <= k && levenshtein(q, w) <= k
        })
        .collect()
}

/// Linear scan: ids of words having a prefix within distance `k` of `q`, ascending.
pub fn oracle_complete(lex: &Lexicon, q: &[char], k: usize) -> Vec<WordId> {
    (0..lex.len() as WordId)
        .filter(|&id| min_prefix_distance(q, lex.word(id)) <= k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(s: &str) -> Vec<char> {
        chars(s)
    }

    fn words(lex: &Lexicon, ids: &[WordId]) -> Vec<String> {
        let mut v: Vec<String> = ids.iter().map(|&i| lex.word_string(i)).collect();
        v.sort();
        v
    }

    #[test]
    fn levenshtein_examples() {
        assert_eq!(levenshtein(&c("ABCjEF"), &c("xBCEFy")), 3);
        assert_eq!(levenshtein(&c("kitten"), &c("kitten")), 0);
        assert_eq!(levenshtein(&c(""), &c("abc")), 3);
        assert_eq!(levenshtein(&c("abc"), &c("")), 3);
    }

    #[test]
    fn script_matches_distance() {
        let (a, b) = (c("ABCjEF"), c("xBCEFy"));
        let ops = edit_script(&a, &b);
        let cost = ops.iter().filter(|o| !matches!(o, EditOp::Keep(_))).count();
        assert_eq!(cost, 3);
        assert_eq!(levenshtein_matrix(&a, &b)[6][6], 3);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&c("cat"), &c("cut")).unwrap(), 1);
        assert_eq!(hamming(&c("dog"), &c("dog")).unwrap(), 0);
        assert!(matches!(hamming(&c("ab"), &c("abc")), Err(Error::Length(2, 3))));
    }

    #[test]
    fn damerau_examples() {
        assert_eq!(damerau(&c("ABCxyEF"), &c("ABCyxEF")), 1);
        assert_eq!(damerau(&c("same"), &c("same")), 0);
        assert_eq!(damerau(&c("ab"), &c("ba")), 1);
        assert_eq!(damerau(&c("ca"), &c("abc")), 2);
    }

    #[test]
    fn prefix_distance_examples() {
        assert_eq!(min_prefix_distance(&c("abc"), &c("abcdef")), 0);
        assert_eq!(min_prefix_distance(&c("abx"), &c("abcdef")), 1);
        // row for "zzz" against prefixes of "a": lev = 3, 3
        assert_eq!(min_prefix_distance(&c("zzz"), &c("a")), 3);
    }

    #[test]
    fn oracle_examples() {
        let lex = Lexicon::from_words(["cat", "cut", "car", "scat"]);
        assert_eq!(words(&lex, &oracle_search(&lex, &c("cat"), 1)), ["car", "cat", "cut", "scat"]);
        assert!(oracle_search(&Lexicon::new(), &c("x"), 1).is_empty());
        let lex = Lexicon::from_words(["cat", "cut"]);
        assert_eq!(words(&lex, &oracle_search(&lex, &c("ct"), 1)), ["cat", "cut"]);

        let lex = Lexicon::from_words(["abcd", "abce", "xyz"]);
        assert_eq!(words(&lex, &oracle_complete(&lex, &c("abc"), 0)), ["abcd", "abce"]);
        assert_eq!(words(&lex, &oracle_complete(&lex, &c("abx"), 1)), ["abcd", "abce"]);
        assert!(oracle_complete(&Lexicon::new(), &c("abc"), 1).is_empty());
    }

    #[test]
    fn parse_scores() {
        assert_eq!(parse_line("abc#12"), Ok(("abc", 12)));
        assert_eq!(parse_line("c#sharp"), Ok(("c#sharp", 0)));
        assert_eq!(parse_line("a#b#7"), Ok(("a#b", 7)));
        assert_eq!(parse_line("tag#"), Ok(("tag#", 0)));
        assert!(parse_line("#5").is_err());
        assert!(parse_line("w#99999999999999999999999").is_err());
    }

    #[test]
    fn parse_dictionary() {
        let (lex, diags) = Lexicon::parse("abcd#10\r\nabce#7\n\nx\nabcd#3\nabcdefg#5").unwrap();
        assert_eq!(lex.len(), 3);
        assert_eq!(diags.len(), 2);
        assert_eq!(lex.score(lex.id_of(&c("abcd")).unwrap()), 10);
        assert_eq!(lex.total_chars(), 15);
        assert_eq!(lex.alphabet(), &['a', 'b', 'c', 'd', 'e', 'f', 'g']);
        let err = Lexicon::parse("ok\n#12\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    fn word() -> impl Strategy<Value = Vec<char>> {
        prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'é']), 0..8)
    }

    proptest! {
        #[test]
        fn levenshtein_is_a_metric(x in word(), y in word(), z in word()) {
            let dxy = levenshtein(&x, &y);
            prop_assert_eq!(dxy, levenshtein(&y, &x));
            prop_assert_eq!(dxy == 0, x == y);
            prop_assert!(levenshtein(&x, &z) <= dxy + levenshtein(&y, &z));
            prop_assert!(x.len().abs_diff(y.len()) <= dxy);
            prop_assert!(dxy <= x.len().max(y.len()));
        }

        #[test]
        fn damerau_bounded_by_levenshtein(x in word(), y in word()) {
            prop_assert!(damerau(&x, &y) <= levenshtein(&x, &y));
        }

        #[test]
        fn prefix_distance_bounded(q in word(), w in word()) {
            prop_assert!(min_prefix_distance(&q, &w) <= levenshtein(&q, &w));
            let brute = (0..=w.len()).map(|j| levenshtein(&q, &w[..j])).min().unwrap();
            prop_assert_eq!(min_prefix_distance(&q, &w), brute);
        }

        #[test]
        fn rolling_rows_match_matrix(x in word(), y in word()) {
            prop_assert_eq!(levenshtein(&x, &y), levenshtein_matrix(&x, &y)[x.len()][y.len()]);
        }

        #[test]
        fn text_round_trip(entries in prop::collection::vec(("[ab#1]{2,6}", 0u64..3), 0..10)) {
            let lex = Lexicon::from_scored(entries);
            let (back, diags) = Lexicon::parse(&lex.to_text()).unwrap();
            prop_assert!(diags.is_empty());
            prop_assert_eq!(back.to_text(), lex.to_text());
            for i in 0..lex.len() as WordId {
                prop_assert_eq!(back.word(i), lex.word(i));
                prop_assert_eq!(back.score(i), lex.score(i));
            }
        }
    }
}
