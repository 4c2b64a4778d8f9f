//! The `lexis` command: build index files, query them with any method,
//! benchmark, and run the suggestion service.
//!
//! Exit codes are 0 on success, 1 on runtime and IO failures, 2 on usage
//! and parse errors. Results go to stdout, diagnostics to stderr.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexis::autocomplete::{Method, DEFAULT_DEPTH};
use lexis::codec::MAGIC;
use lexis::hashdict::HashConfig;
use lexis::text::{chars, levenshtein};
use lexis::{Engine, EngineConfig, Lexicon, SearchMethod, SuggestionPage};
use lexis_service::{ServiceConfig, ServiceError, DICT_ENV, MAX_K};
use serde::Serialize;

pub mod bench;

#[derive(Parser, Debug)]
#[command(name = "lexis", version, about = "Approximate dictionary search and fuzzy autocompletion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build every index from a dictionary and write an index file
    Build(BuildArgs),
    /// Search or complete queries given as arguments or on stdin
    Query(QueryArgs),
    /// Time queries and print `method,query_len,mean_us,p99_us` CSV
    Bench(bench::BenchArgs),
    /// Run the HTTP suggestion service
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Dictionary with one `word` or `word#score` per line
    #[arg(env = DICT_ENV)]
    pub dict: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Hash seed
    #[arg(long, default_value_t = HashConfig::default().seed)]
    pub seed: u64,
    /// Prefix depth of the 1-error completion dictionary
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

/// A search method, or ranked completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryMethod {
    Search(SearchMethod),
    Complete,
}

impl QueryMethod {
    pub fn all() -> Vec<QueryMethod> {
        SearchMethod::ALL.into_iter().map(QueryMethod::Search).chain([QueryMethod::Complete]).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            QueryMethod::Search(m) => m.name(),
            QueryMethod::Complete => "complete",
        }
    }
}

impl fmt::Display for QueryMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn parse_query_method(s: &str) -> Result<QueryMethod, String> {
    if s == "complete" {
        return Ok(QueryMethod::Complete);
    }
    SearchMethod::parse(s).map(QueryMethod::Search).ok_or_else(|| {
        let names: Vec<_> = QueryMethod::all().into_iter().map(QueryMethod::name).collect();
        format!("unknown method {s:?}, expected one of {}", names.join(", "))
    })
}

fn parse_completion_method(s: &str) -> Result<Method, String> {
    Method::parse(s).ok_or_else(|| {
        let names: Vec<_> = Method::ALL.into_iter().map(Method::name).collect();
        format!("unknown completion method {s:?}, expected one of {}", names.join(", "))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct QueryArgs {
    /// Index file, or a dictionary to build from
    #[arg(short, long, env = DICT_ENV)]
    pub index: PathBuf,
    /// Queries; read one per line from stdin when none are given
    pub queries: Vec<String>,
    /// hash_k1, hash_k2, trt_ci, trt_wni, trt_cwni or complete
    #[arg(short, long, default_value = "trt_ci", value_parser = parse_query_method)]
    pub method: QueryMethod,
    /// Run hash_k1, trt_ci, trt_wni and trt_cwni and fail unless they agree
    #[arg(long, conflicts_with = "method")]
    pub all: bool,
    /// Page size (complete only, default 10)
    #[arg(short)]
    pub k: Option<usize>,
    /// Error budget, 0 or 1 (complete only, default 1)
    #[arg(long)]
    pub err: Option<u8>,
    /// Page number from 0 (complete only)
    #[arg(long)]
    pub page: Option<usize>,
    /// Valid-node method: naive, sl, sl-node, sl-3level (complete only)
    #[arg(long, value_parser = parse_completion_method)]
    pub completion_method: Option<Method>,
    #[arg(short, long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    /// Dictionary or index file
    #[arg(env = DICT_ENV)]
    pub dict: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Default page size
    #[arg(short, default_value_t = 10)]
    pub k: usize,
    /// Default error budget
    #[arg(long, default_value_t = 1)]
    pub err: u8,
    #[arg(long, default_value = "sl-3level", value_parser = parse_completion_method)]
    pub completion_method: Method,
    /// Directory of the web page (defaults to the bundled demo)
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    /// Write the updated `word#score` lexicon here on shutdown
    #[arg(long)]
    pub dump_scores: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lexis::Error> for CliError {
    fn from(e: lexis::Error) -> Self {
        match e {
            lexis::Error::Parse { .. } | lexis::Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Build(a) => build(&a),
        Command::Query(a) => query(&a, &mut out),
        Command::Bench(a) => bench::bench(&a, &mut out),
        Command::Serve(a) => serve(a),
    }
}

fn with_path(path: &Path, e: lexis::Error) -> CliError {
    match CliError::from(e) {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        CliError::Runtime(m) => CliError::Runtime(format!("{}: {m}", path.display())),
    }
}

/// Loads an index file, or builds every index from a dictionary file.
pub fn open_index(path: &Path) -> Result<Engine, CliError> {
    let bytes = std::fs::read(path).map_err(|e| with_path(path, e.into()))?;
    if bytes.starts_with(MAGIC) {
        return Engine::from_bytes(&bytes).map_err(|e| with_path(path, e));
    }
    let text = String::from_utf8(bytes).map_err(|e| CliError::Usage(format!("{}: not UTF-8: {e}", path.display())))?;
    let (lex, _) = Lexicon::parse(&text).map_err(|e| with_path(path, e))?;
    Engine::build(lex, EngineConfig::default()).map_err(|e| with_path(path, e))
}

fn build(a: &BuildArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (lex, diags) = Lexicon::load(&a.dict).map_err(|e| with_path(&a.dict, e))?;
    let mut cfg = EngineConfig { prefix_depth: a.depth, ..EngineConfig::default() };
    cfg.hash.seed = a.seed;
    let engine = Engine::build(lex, cfg)?;
    let bytes = engine.to_bytes();
    std::fs::write(&a.out, &bytes).map_err(|e| CliError::Runtime(format!("{}: {e}", a.out.display())))?;
    let st = engine.stats();
    eprintln!(
        "{} words ({} lines skipped), {} bytes written to {} in {:.2?}",
        st.words,
        diags.len(),
        bytes.len(),
        a.out.display(),
        start.elapsed()
    );
    Ok(())
}

#[derive(Serialize)]
struct SearchHit {
    word: String,
    distance: usize,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Answer {
    Search { query: String, method: String, results: Vec<SearchHit> },
    Complete { query: String, method: String, suggestions: Vec<lexis_service::WireSuggestion>, has_more: bool },
}

fn search_all(engine: &Engine, q: &str) -> Result<Vec<String>, CliError> {
    let methods = [SearchMethod::HashK1, SearchMethod::TrtCi, SearchMethod::TrtWni, SearchMethod::TrtCwni];
    let first = engine.search_words(q, methods[0])?;
    for m in &methods[1..] {
        let other = engine.search_words(q, *m)?;
        if other != first {
            return Err(CliError::Runtime(format!(
                "methods disagree on {q:?}: {} gives {first:?}, {m} gives {other:?}",
                methods[0]
            )));
        }
    }
    Ok(first)
}

fn answer(engine: &Engine, a: &QueryArgs, q: &str) -> Result<Answer, CliError> {
    let hits = |words: Vec<String>| words.into_iter().map(|w| SearchHit { distance: levenshtein(&chars(q), &chars(&w)), word: w }).collect();
    if a.all {
        return Ok(Answer::Search { query: q.into(), method: "all".into(), results: hits(search_all(engine, q)?) });
    }
    match a.method {
        QueryMethod::Search(m) => Ok(Answer::Search { query: q.into(), method: m.name().into(), results: hits(engine.search_words(q, m)?) }),
        QueryMethod::Complete => {
            let k = a.k.unwrap_or(10);
            let page: SuggestionPage = engine.complete(q, k, a.err.unwrap_or(1), a.completion_method.unwrap_or(Method::Sl3Level), a.page.unwrap_or(0))?;
            Ok(Answer::Complete {
                query: q.into(),
                method: "complete".into(),
                suggestions: page
                    .suggestions
                    .into_iter()
                    .map(|s| lexis_service::WireSuggestion { word: s.word, score: s.score, exact: s.exact })
                    .collect(),
                has_more: page.has_more,
            })
        }
    }
}

fn check_query_args(a: &QueryArgs) -> Result<(), CliError> {
    let completing = !a.all && a.method == QueryMethod::Complete;
    if !completing {
        let given = [("-k", a.k.is_some()), ("--err", a.err.is_some()), ("--page", a.page.is_some()), ("--completion-method", a.completion_method.is_some())];
        if let Some((flag, _)) = given.iter().find(|g| g.1) {
            return Err(CliError::Usage(format!("{flag} only applies to the complete method")));
        }
    }
    if let Some(k) = a.k {
        if !(1..=MAX_K).contains(&k) {
            return Err(CliError::Usage(format!("k must be in 1..={MAX_K}")));
        }
    }
    if a.err.is_some_and(|e| e > 1) {
        return Err(CliError::Usage("completion error budget must be 0 or 1".into()));
    }
    Ok(())
}

fn query(a: &QueryArgs, out: &mut impl Write) -> Result<(), CliError> {
    check_query_args(a)?;
    let engine = open_index(&a.index)?;
    let queries: Vec<String> = if a.queries.is_empty() {
        io::stdin().lock().lines().collect::<io::Result<Vec<_>>>()?.into_iter().filter(|l| !l.trim().is_empty()).collect()
    } else {
        a.queries.clone()
    };
    let answers = queries.iter().map(|q| answer(&engine, a, q)).collect::<Result<Vec<_>, _>>()?;
    write_answers(&answers, a.format, out)
}

fn write_answers(answers: &[Answer], format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, answers)?;
            writeln!(out)?;
        }
        Format::Text => {
            for a in answers {
                if answers.len() > 1 {
                    let q = match a {
                        Answer::Search { query, .. } | Answer::Complete { query, .. } => query,
                    };
                    writeln!(out, "> {q}")?;
                }
                match a {
                    Answer::Search { results, .. } => {
                        for h in results {
                            writeln!(out, "{}", h.word)?;
                        }
                    }
                    Answer::Complete { suggestions, has_more, .. } => {
                        for s in suggestions {
                            writeln!(out, "{}\t{}\t{}", s.word, s.score, if s.exact { "exact" } else { "approx" })?;
                        }
                        if *has_more {
                            eprintln!("(more results on the next page)");
                        }
                    }
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let completing = matches!(answers.first(), Some(Answer::Complete { .. }));
            if completing {
                w.write_record(["query", "method", "rank", "word", "score", "exact"])?;
            } else {
                w.write_record(["query", "method", "word", "distance"])?;
            }
            for a in answers {
                match a {
                    Answer::Search { query, method, results } => {
                        for h in results {
                            w.write_record([query, method, &h.word, &h.distance.to_string()])?;
                        }
                    }
                    Answer::Complete { query, method, suggestions, .. } => {
                        for (i, s) in suggestions.iter().enumerate() {
                            w.write_record([query, method, &(i + 1).to_string(), &s.word, &s.score.to_string(), &s.exact.to_string()])?;
                        }
                    }
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

async fn shutdown_signal() {
    #[cfg(unix)]
    {
        use tokio::signal::unix::{signal, SignalKind};
        match signal(SignalKind::terminate()) {
            Ok(mut term) => {
                tokio::select! {
                    _ = tokio::signal::ctrl_c() => {}
                    _ = term.recv() => {}
                }
            }
            Err(_) => {
                let _ = tokio::signal::ctrl_c().await;
            }
        }
    }
    #[cfg(not(unix))]
    {
        let _ = tokio::signal::ctrl_c().await;
    }
    log::info!("shutting down");
}

fn serve(a: ServeArgs) -> Result<(), CliError> {
    let mut cfg = ServiceConfig::new(a.dict);
    cfg.addr = a.addr;
    cfg.default_k = a.k;
    cfg.max_errors = a.err;
    cfg.method = a.completion_method;
    cfg.dump_scores = a.dump_scores;
    if let Some(d) = a.static_dir {
        cfg.static_dir = d;
    }
    cfg.validate().map_err(CliError::Usage)?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(lexis_service::run(cfg, shutdown_signal())).map_err(|e| match e {
        ServiceError::Config(m) => CliError::Usage(m),
        e => CliError::Runtime(e.to_string()),
    })
}
