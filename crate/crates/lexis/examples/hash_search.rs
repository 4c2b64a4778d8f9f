//! One-error lookup with the hash dictionary, then incremental inserts.

use lexis::hashdict::HashConfig;
use lexis::text::chars;
use lexis::{ApproxDict, HashIndex, Lexicon};

fn main() -> lexis::Result<()> {
    let lex = Lexicon::from_words(["leaf", "lean", "least", "lyre", "deaf", "loaf", "leap"]);
    let mut idx = HashIndex::build(&lex, HashConfig::default())?;
    let show = |idx: &HashIndex, q: &str| {
        let ids = idx.query_k1(&chars(q));
        let words: Vec<String> = ids.iter().map(|&i| lex.word_string(i)).collect();
        println!("{q:>6} -> {words:?}");
    };
    for q in ["leaf", "lesf", "lef", "leaaf", "zzzz"] {
        show(&idx, q);
    }
    println!("exact lookup of 'lyre': {:?}", idx.lookup_exact(&chars("lyre")));

    // inserting needs room in every table of the word's length
    match idx.insert_word(&chars("lyen")) {
        Ok(id) => println!("inserted lyen as id {id}; lyex -> {:?}", idx.query_k1(&chars("lyex"))),
        Err(e) => println!("insert refused: {e}"),
    }
    Ok(())
}
