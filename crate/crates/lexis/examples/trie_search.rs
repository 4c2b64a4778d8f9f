//! One-error lookup with the trie and the trie of mirrored words.

use lexis::bidtrie::BidirectionalTrie;
use lexis::text::chars;
use lexis::Lexicon;

fn main() {
    let lex = Lexicon::from_words(["cat", "cut", "car", "cart", "scat", "at"]);
    let t = BidirectionalTrie::build(&lex);
    let mut scratch = t.scratch();
    let names = |ids: Vec<u32>| ids.into_iter().map(|i| lex.word_string(i)).collect::<Vec<_>>();
    for q in ["cxt", "ca", "cat", "scart", "dog"] {
        let q = chars(q);
        let (ci, stats) = t.trt_ci_stats(&q);
        println!(
            "{:>6}: ci {:?} ({} steps), wni {:?}, cwni {:?}",
            q.iter().collect::<String>(),
            names(ci),
            stats.steps,
            names(t.trt_wni(&q, &mut scratch)),
            names(t.trt_cwni(&q, &mut scratch)),
        );
    }
    let (fwd, bwd) = t.node_counts();
    println!("forward trie {fwd} nodes, backward trie {bwd} nodes");
}
