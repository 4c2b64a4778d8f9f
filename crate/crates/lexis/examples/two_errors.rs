//! Two-error lookup through the level-two substitution lists.

use lexis::hashdict::{HashConfig, Variant};
use lexis::text::chars;
use lexis::{ApproxDict, HashIndex, Lexicon};

fn main() -> lexis::Result<()> {
    let lex = Lexicon::from_words(["ALABAMA", "ALASKA", "ARIZONA", "ARKANSAS", "GEORGIA", "MONTANA"]);
    for variant in [Variant::Plain, Variant::Signed] {
        let idx = HashIndex::build(&lex, HashConfig { variant, ..HashConfig::default() })?;
        for q in ["AXABAYA", "ALASKA", "MANTONA", "GEORGE", "TEXAS"] {
            let words: Vec<String> = idx.query_k2(&chars(q))?.into_iter().map(|i| lex.word_string(i)).collect();
            println!("{variant:?} {q:>8} -> {words:?}");
        }
    }
    let no_l2 = HashIndex::build(&lex, HashConfig { level2: false, ..HashConfig::default() })?;
    println!("without level two: {:?}", no_l2.query_k2(&chars("AXABAYA")).map_err(|e| e.to_string()));
    Ok(())
}
