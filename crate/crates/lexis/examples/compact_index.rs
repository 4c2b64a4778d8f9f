//! Rank-compacting the hash dictionary and what it saves.

use lexis::bits::BitRankVector;
use lexis::codec::{Reader, Writer};
use lexis::hashdict::{HashConfig, Variant};
use lexis::text::chars;
use lexis::{ApproxDict, CompactHashIndex, HashIndex, Lexicon};

fn main() -> lexis::Result<()> {
    let bv = BitRankVector::from_bits([true, false, true, true, false, false, true, false, true].into_iter(), 4);
    let ranks: Vec<usize> = (0..bv.len()).map(|i| bv.rank(i)).collect();
    println!("ranks {ranks:?}");

    let words: Vec<String> = (0..2000u32).map(|i| format!("w{:x}{}", i * 7919 % 4099, ["ing", "ed", "s", "er"][i as usize % 4])).collect();
    let lex = Lexicon::from_words(&words);
    let cfg = HashConfig { variant: Variant::Signed, ..HashConfig::default() };
    let idx = HashIndex::build(&lex, cfg)?;
    let small = idx.compact();
    let q = chars("w1f3ing");
    assert_eq!(idx.query_k1(&q), small.query_k1(&q));
    println!("{} words, {} characters", lex.len(), lex.total_chars());
    println!("compacted core {} bytes, level two {} bytes", small.core_bytes(), small.level2_bytes());

    let mut core = Writer::new();
    small.encode_core(&mut core);
    let mut l2 = Writer::new();
    small.encode_level2(&mut l2);
    let (core, l2) = (core.into_bytes(), l2.into_bytes());
    let back = CompactHashIndex::decode(&mut Reader::new(&core), Some(&mut Reader::new(&l2)), cfg)?;
    assert_eq!(back, small);
    println!("decoded index answers w1f3ing with {} words", back.query_k1(&q).len());
    let mut copy = back.clone();
    println!("insert into compacted index: {:?}", copy.insert_word(&chars("new")).map_err(|e| e.to_string()));
    Ok(())
}
