//! Ranked completion with one error, paging, score updates and sessions.

use lexis::autocomplete::{CompactScoredTrie, Method, PrefixSubstDict, Session, DEFAULT_DEPTH};
use lexis::text::chars;
use lexis::Lexicon;

fn main() -> lexis::Result<()> {
    let (lex, _) = Lexicon::parse("abcd#10\nabce#7\nabcdefg#5\nabdomen#3\nxyz#1\n")?;
    let mut trie = CompactScoredTrie::build(&lex);
    let psd = PrefixSubstDict::build(&trie, DEFAULT_DEPTH, 1)?;

    let mut ranker = trie.ranker(Some(&psd), &chars("abc"), Method::SlNode, 1)?;
    let mut page_no = 0;
    loop {
        let page = ranker.next_page(2)?;
        let row: Vec<String> = page.suggestions.iter().map(|s| format!("{}({}{})", s.word, s.score, if s.exact { "" } else { "~" })).collect();
        println!("page {page_no}: {row:?}");
        page_no += 1;
        if !page.has_more {
            break;
        }
    }

    let fuzzy = trie.topk(Some(&psd), &chars("abx"), Method::Naive, 1, 3)?;
    println!("abx: {:?}", fuzzy.suggestions.iter().map(|s| &s.word).collect::<Vec<_>>());

    for _ in 0..4 {
        trie.update_score(&chars("abce"), 1)?;
    }
    let top = trie.topk(None, &chars("abc"), Method::Naive, 1, 1)?;
    println!("after four selections of abce: {}", top.suggestions[0].word);

    let mut session = Session::new();
    for q in ["a", "ab", "abd", "x"] {
        let page = session.search_end_node(&trie, Some(&psd), &chars(q), Method::Sl3Level, 1, 3)?;
        let words: Vec<_> = page.suggestions.iter().map(|s| s.word.as_str()).collect();
        println!("{q:>4} (resumed: {}): {words:?}", session.resumed());
    }
    Ok(())
}
