//! Builds every index over the bundled English word list and times queries.
//!
//! Usage: cargo run --release -p lexis --example english_wordlist [N]
//! where N limits the lexicon to a seeded sample of N words.

use std::time::Instant;

use lexis::autocomplete::Method;
use lexis::text::{chars, to_string};
use lexis::{Engine, EngineConfig, Lexicon, SearchMethod};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDLIST: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/english-words.txt");

fn main() -> lexis::Result<()> {
    let limit: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let (full, _) = Lexicon::load(WORDLIST)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut words: Vec<String> = full.words().map(to_string).collect();
    if let Some(n) = limit {
        words.shuffle(&mut rng);
        words.truncate(n);
    }
    let lex = Lexicon::from_words(&words);
    println!("{} words, {} characters, sigma {}", lex.len(), lex.total_chars(), lex.sigma());

    let t = Instant::now();
    let engine = Engine::build(lex, EngineConfig::default())?;
    println!("build: {:.2?}", t.elapsed());
    let st = engine.stats();
    println!(
        "hash index: {} bytes core, {} bytes level two; trie nodes {} + {}",
        st.hash_core_bytes, st.hash_level2_bytes, st.bidtrie_nodes, st.completion_nodes
    );

    // queries: dictionary words with one random substitution
    let queries: Vec<Vec<char>> = (0..1000)
        .map(|_| {
            let mut q = chars(words.choose(&mut rng).unwrap());
            let i = rng.gen_range(0..q.len());
            q[i] = rng.gen_range(b'a'..=b'z') as char;
            q
        })
        .collect();
    for m in SearchMethod::ALL {
        let t = Instant::now();
        let hits: usize = queries.iter().map(|q| engine.search(q, m).unwrap().len()).sum();
        println!("{m:>9}: {:>8.2?} per query, {hits} results", t.elapsed() / queries.len() as u32);
    }
    for m in Method::ALL {
        let t = Instant::now();
        for q in &queries {
            let prefix: String = q[..q.len().min(5)].iter().collect();
            engine.complete(&prefix, 10, 1, m, 0)?;
        }
        println!("{:>9}: {:>8.2?} per top-10 completion", m.name(), t.elapsed() / queries.len() as u32);
    }
    let page = engine.complete("algoritm", 5, 1, Method::Sl3Level, 0)?;
    let shown: Vec<_> = page.suggestions.iter().map(|s| s.word.as_str()).collect();
    println!("algoritm -> {shown:?}");
    Ok(())
}
