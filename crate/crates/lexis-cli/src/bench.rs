//! Query timing. Random queries are dictionary words with injected edits,
//! all drawn from one seeded generator.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use lexis::autocomplete::Method;
use lexis::text::{chars, to_string};
use lexis::{Engine, Lexicon};
use lexis_service::{DICT_ENV, MAX_K};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{open_index, parse_completion_method, parse_query_method, CliError, QueryMethod};

pub const HEADER: [&str; 4] = ["method", "query_len", "mean_us", "p99_us"];

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Index file, or a dictionary to build from
    #[arg(short, long, env = DICT_ENV)]
    pub index: PathBuf,
    /// Queries, one per line
    #[arg(long, conflicts_with = "random")]
    pub queries: Option<PathBuf>,
    /// Number of random queries (default 1000)
    #[arg(long)]
    pub random: Option<usize>,
    /// Edits injected into each random query
    #[arg(long, default_value_t = 1)]
    pub errors: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Timed runs per query
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Methods to time, repeatable; all of them by default
    #[arg(short, long, value_parser = parse_query_method)]
    pub method: Vec<QueryMethod>,
    /// Page size for complete
    #[arg(short, default_value_t = 10)]
    pub k: usize,
    /// Error budget for complete
    #[arg(long, default_value_t = 1)]
    pub err: u8,
    #[arg(long, default_value = "sl-3level", value_parser = parse_completion_method)]
    pub completion_method: Method,
    /// Also write the query set here, one per line
    #[arg(long)]
    pub save_queries: Option<PathBuf>,
}

/// `n` dictionary words, each with `errors` random substitutions, insertions
/// or deletions over the lexicon's alphabet.
pub fn random_queries(lex: &Lexicon, n: usize, errors: usize, seed: u64) -> Vec<String> {
    if lex.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = lex.alphabet();
    (0..n)
        .map(|_| {
            let mut q = lex.word(rng.gen_range(0..lex.len() as u32)).to_vec();
            for _ in 0..errors {
                let c = alphabet[rng.gen_range(0..alphabet.len())];
                match rng.gen_range(0..3) {
                    0 if !q.is_empty() => {
                        let i = rng.gen_range(0..q.len());
                        q[i] = c;
                    }
                    1 if q.len() > 1 => {
                        q.remove(rng.gen_range(0..q.len()));
                    }
                    _ => q.insert(rng.gen_range(0..=q.len()), c),
                }
            }
            to_string(&q)
        })
        .collect()
}

/// Mean and 99th percentile (nearest rank) of the samples.
pub fn summarize(samples: &mut [f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    samples.sort_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let rank = ((samples.len() as f64) * 0.99).ceil() as usize;
    (mean, samples[rank.clamp(1, samples.len()) - 1])
}

fn run_once(engine: &Engine, a: &BenchArgs, m: QueryMethod, q: &str) -> Result<usize, CliError> {
    Ok(match m {
        QueryMethod::Search(s) => engine.search(&chars(q), s)?.len(),
        QueryMethod::Complete => engine.complete(q, a.k, a.err, a.completion_method, 0)?.suggestions.len(),
    })
}

pub fn bench(a: &BenchArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if !(1..=MAX_K).contains(&a.k) || a.err > 1 {
        return Err(CliError::Usage(format!("k must be in 1..={MAX_K} and err 0 or 1")));
    }
    let engine = open_index(&a.index)?;
    let queries = match &a.queries {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?
            .lines()
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect(),
        None => random_queries(engine.lexicon(), a.random.unwrap_or(1000), a.errors, a.seed),
    };
    if let Some(p) = &a.save_queries {
        let text: String = queries.iter().map(|q| format!("{q}\n")).collect();
        std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?;
    }
    let methods = if a.method.is_empty() { QueryMethod::all() } else { a.method.clone() };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for m in methods {
        let mut by_len: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        let mut found = 0;
        for q in &queries {
            let start = Instant::now();
            for _ in 0..a.reps {
                found += run_once(&engine, a, m, q)?;
            }
            let us = start.elapsed().as_secs_f64() * 1e6 / a.reps as f64;
            by_len.entry(q.chars().count()).or_default().push(us);
        }
        log::debug!("{m}: {found} results");
        for (len, mut samples) in by_len {
            let (mean, p99) = summarize(&mut samples);
            w.write_record([m.name().to_string(), len.to_string(), format!("{mean:.3}"), format!("{p99:.3}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_queries_repeat() {
        let lex = Lexicon::from_words(["alpha", "beta", "gamma", "delta"]);
        let a = random_queries(&lex, 50, 2, 7);
        assert_eq!(a, random_queries(&lex, 50, 2, 7));
        assert_ne!(a, random_queries(&lex, 50, 2, 8));
        assert_eq!(a.len(), 50);
        assert!(random_queries(&Lexicon::new(), 5, 1, 1).is_empty());
    }

    #[test]
    fn injected_edits_stay_within_budget() {
        let lex = Lexicon::from_words(["alpha", "beta", "gamma", "delta"]);
        for e in 0..3 {
            for q in random_queries(&lex, 100, e, 3) {
                let q = chars(&q);
                let d = lex.words().map(|w| lexis::text::levenshtein(&q, w)).min().unwrap();
                assert!(d <= e, "{q:?}");
            }
        }
        let zero = random_queries(&lex, 20, 0, 3);
        assert!(zero.iter().all(|q| lex.id_of(&chars(q)).is_some()));
    }

    #[test]
    fn percentile() {
        let mut s: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(summarize(&mut s), (50.5, 99.0));
        assert_eq!(summarize(&mut [3.0]), (3.0, 3.0));
        assert_eq!(summarize(&mut []), (0.0, 0.0));
    }
}
