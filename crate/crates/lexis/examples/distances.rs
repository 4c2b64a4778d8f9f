//! Reference distances and the brute-force search they back.

use lexis::text::{chars, damerau, edit_script, hamming, levenshtein, min_prefix_distance, oracle_search};
use lexis::Lexicon;

fn main() {
    let (v, w) = (chars("ABCjEF"), chars("xBCEFy"));
    println!("levenshtein(ABCjEF, xBCEFy) = {}", levenshtein(&v, &w));
    for op in edit_script(&v, &w) {
        println!("  {op:?}");
    }
    println!("damerau(ABCxyEF, ABCyxEF) = {}", damerau(&chars("ABCxyEF"), &chars("ABCyxEF")));
    println!("hamming(cat, cut) = {:?}", hamming(&chars("cat"), &chars("cut")));
    println!("hamming(ab, abc) = {:?}", hamming(&chars("ab"), &chars("abc")));
    println!("min_prefix_distance(abx, abcdef) = {}", min_prefix_distance(&chars("abx"), &chars("abcdef")));

    let lex = Lexicon::from_words(["cat", "cut", "car", "scat", "dog"]);
    let hits: Vec<String> = oracle_search(&lex, &chars("cat"), 1).into_iter().map(|i| lex.word_string(i)).collect();
    println!("within 1 of cat: {hits:?}");
}
