//! HTTP JSON suggestion service.
//!
//! * `GET /suggest?q=&k=&err=&page=` ranked completions, page by page
//! * `POST /select` with `{"word": ...}` raises the word's score by one
//! * `GET /health` readiness and lexicon size
//! * everything else is served from the static directory (the demo page)
//!
//! Paging is stateless: page `p` is recomputed and the first `p * k`
//! suggestions are skipped.

use std::collections::HashMap;
use std::future::Future;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lexis::autocomplete::Method;
use lexis::codec::MAGIC;
use lexis::{Engine, EngineConfig, Lexicon};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub const MAX_K: usize = 100;

/// Environment variable that overrides the configured dictionary path.
pub const DICT_ENV: &str = "LEXIS_DICT";

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub addr: SocketAddr,
    /// Dictionary text file or `LEXIS1` index file.
    pub dict: PathBuf,
    pub default_k: usize,
    pub max_errors: u8,
    pub method: Method,
    pub static_dir: PathBuf,
    /// Where to write `word#score` lines on shutdown, if anywhere.
    pub dump_scores: Option<PathBuf>,
}

impl ServiceConfig {
    pub fn new(dict: impl Into<PathBuf>) -> Self {
        Self {
            addr: SocketAddr::from(([127, 0, 0, 1], 8080)),
            dict: dict.into(),
            default_k: 10,
            max_errors: 1,
            method: Method::Sl3Level,
            static_dir: default_static_dir(),
            dump_scores: None,
        }
    }

    /// Applies `LEXIS_DICT` if set.
    pub fn with_env(mut self) -> Self {
        if let Some(p) = std::env::var_os(DICT_ENV) {
            self.dict = p.into();
        }
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(1..=MAX_K).contains(&self.default_k) {
            return Err(format!("default k {} not in 1..={MAX_K}", self.default_k));
        }
        if self.max_errors > 1 {
            return Err(format!("error budget {} not in 0..=1", self.max_errors));
        }
        Ok(())
    }
}

/// The demo page shipped with this crate.
pub fn default_static_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/static"))
}

pub struct Loaded {
    pub engine: Engine,
    pub build_ms: u64,
}

pub struct AppState {
    pub cfg: ServiceConfig,
    index: RwLock<Option<Loaded>>,
}

impl AppState {
    /// State with no index yet; requests get 503 until [`install`](Self::install).
    pub fn empty(cfg: ServiceConfig) -> Arc<Self> {
        Arc::new(Self { cfg, index: RwLock::new(None) })
    }

    pub fn with_engine(cfg: ServiceConfig, engine: Engine, build_ms: u64) -> Arc<Self> {
        let s = Self::empty(cfg);
        s.install(engine, build_ms);
        s
    }

    pub fn install(&self, engine: Engine, build_ms: u64) {
        *self.index.write() = Some(Loaded { engine, build_ms });
    }

    /// Lexicon with the current scores, if loaded.
    pub fn lexicon(&self) -> Option<Lexicon> {
        self.index.read().as_ref().map(|l| l.engine.lexicon().clone())
    }
}

/// Loads a dictionary or index file with only the completion components.
pub fn load_engine(path: &Path) -> lexis::Result<Engine> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        let e = Engine::from_bytes(&bytes)?;
        if e.completion_trie().is_none() {
            return Err(lexis::Error::Parameter("index file has no completion trie".into()));
        }
        return Ok(e);
    }
    let text = String::from_utf8(bytes).map_err(|e| lexis::Error::Parse { line: 0, msg: format!("not UTF-8: {e}") })?;
    let (lex, diags) = Lexicon::parse(&text)?;
    if !diags.is_empty() {
        log::info!("{} dictionary lines skipped", diags.len());
    }
    let cfg = EngineConfig { hash_index: false, bidirectional_trie: false, ..EngineConfig::default() };
    Engine::build(lex, cfg)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WireSuggestion {
    pub word: String,
    pub score: u64,
    pub exact: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SuggestResponse {
    pub query: String,
    pub k: usize,
    pub suggestions: Vec<WireSuggestion>,
    pub has_more: bool,
    pub took_us: u64,
}

#[derive(Deserialize)]
struct SelectRequest {
    word: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SelectResponse {
    pub word: String,
    pub score: u64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct HealthResponse {
    pub status: String,
    pub words: usize,
    pub build_ms: u64,
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    (status, Json(serde_json::json!({ "error": msg.into() }))).into_response()
}

fn not_ready() -> Response {
    error(StatusCode::SERVICE_UNAVAILABLE, "index not ready")
}

fn int_param<T: std::str::FromStr>(p: &HashMap<String, String>, name: &str, default: T) -> Result<T, Response> {
    match p.get(name) {
        None => Ok(default),
        Some(v) => v.trim().parse().map_err(|_| error(StatusCode::BAD_REQUEST, format!("{name} must be a non-negative integer"))),
    }
}

async fn suggest(State(st): State<Arc<AppState>>, Query(p): Query<HashMap<String, String>>) -> Response {
    let start = Instant::now();
    let q = match p.get("q").map(|q| q.trim()) {
        Some(q) if !q.is_empty() => q.to_string(),
        _ => return error(StatusCode::BAD_REQUEST, "missing query parameter q"),
    };
    let k: usize = match int_param(&p, "k", st.cfg.default_k) {
        Ok(k) if (1..=MAX_K).contains(&k) => k,
        Ok(_) => return error(StatusCode::BAD_REQUEST, format!("k must be in 1..={MAX_K}")),
        Err(r) => return r,
    };
    let err: u8 = match int_param(&p, "err", st.cfg.max_errors) {
        Ok(e) if e <= 1 => e,
        Ok(_) => return error(StatusCode::BAD_REQUEST, "err must be 0 or 1"),
        Err(r) => return r,
    };
    let page: usize = match int_param(&p, "page", 0) {
        Ok(p) => p,
        Err(r) => return r,
    };
    let guard = st.index.read();
    let Some(loaded) = guard.as_ref() else {
        return not_ready();
    };
    match loaded.engine.complete(&q, k, err, st.cfg.method, page) {
        Ok(res) => Json(SuggestResponse {
            query: q,
            k,
            suggestions: res.suggestions.into_iter().map(|s| WireSuggestion { word: s.word, score: s.score, exact: s.exact }).collect(),
            has_more: res.has_more,
            took_us: start.elapsed().as_micros() as u64,
        })
        .into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn select(State(st): State<Arc<AppState>>, body: Bytes) -> Response {
    let req: SelectRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("expected {{\"word\": string}}: {e}")),
    };
    let mut guard = st.index.write();
    let Some(loaded) = guard.as_mut() else {
        return not_ready();
    };
    match loaded.engine.select(&req.word, 1) {
        Ok(score) => Json(SelectResponse { word: req.word, score }).into_response(),
        Err(lexis::Error::NotFound(_)) => error(StatusCode::NOT_FOUND, format!("unknown word {:?}", req.word)),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn health(State(st): State<Arc<AppState>>) -> Response {
    match st.index.read().as_ref() {
        Some(l) => Json(HealthResponse { status: "ok".into(), words: l.engine.lexicon().len(), build_ms: l.build_ms }).into_response(),
        None => (
            StatusCode::SERVICE_UNAVAILABLE,
            Json(HealthResponse { status: "loading".into(), words: 0, build_ms: 0 }),
        )
            .into_response(),
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let files = ServeDir::new(&state.cfg.static_dir);
    Router::new()
        .route("/suggest", get(suggest))
        .route("/select", post(select))
        .route("/health", get(health))
        .fallback_service(files)
        .layer(CorsLayer::permissive())
        .with_state(state)
}

#[derive(Debug)]
pub enum ServiceError {
    Load(lexis::Error),
    Config(String),
    Io(std::io::Error),
}

impl std::fmt::Display for ServiceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ServiceError::Load(e) => write!(f, "cannot load dictionary: {e}"),
            ServiceError::Config(e) => write!(f, "bad configuration: {e}"),
            ServiceError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ServiceError {}

/// Builds the index, binds, and serves until `shutdown` resolves.
pub async fn run(cfg: ServiceConfig, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServiceError> {
    cfg.validate().map_err(ServiceError::Config)?;
    let start = Instant::now();
    let dict = cfg.dict.clone();
    let engine = tokio::task::spawn_blocking(move || load_engine(&dict))
        .await
        .map_err(|e| ServiceError::Io(std::io::Error::other(e)))?
        .map_err(ServiceError::Load)?;
    let build_ms = start.elapsed().as_millis() as u64;
    log::info!("{} words ready in {build_ms} ms", engine.lexicon().len());
    let state = AppState::with_engine(cfg.clone(), engine, build_ms);
    let listener = tokio::net::TcpListener::bind(cfg.addr).await.map_err(ServiceError::Io)?;
    log::info!("listening on http://{}", listener.local_addr().map_err(ServiceError::Io)?);
    axum::serve(listener, router(state.clone())).with_graceful_shutdown(shutdown).await.map_err(ServiceError::Io)?;
    if let (Some(path), Some(lex)) = (&cfg.dump_scores, state.lexicon()) {
        std::fs::write(path, lex.to_text()).map_err(ServiceError::Io)?;
        log::info!("scores written to {}", path.display());
    }
    Ok(())
}
