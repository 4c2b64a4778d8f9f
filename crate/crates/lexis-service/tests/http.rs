use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use lexis::autocomplete::Method;
use lexis::{Engine, EngineConfig, Lexicon};
use lexis_service::{router, AppState, HealthResponse, SelectResponse, ServiceConfig, SuggestResponse};
use tower::ServiceExt;

fn state() -> Arc<AppState> {
    let (lex, _) = Lexicon::parse("abcd#10\nabce#7\nabcdefg#5\n").unwrap();
    let engine = Engine::build(lex, EngineConfig::default()).unwrap();
    AppState::with_engine(ServiceConfig::new("unused"), engine, 3)
}

async fn call(app: &Router, req: Request<Body>) -> (StatusCode, Option<String>, Vec<u8>) {
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let ctype = res.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string());
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, ctype, body)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Option<String>, Vec<u8>) {
    call(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post_select(app: &Router, body: &str) -> (StatusCode, Vec<u8>) {
    let req = Request::post("/select").header(header::CONTENT_TYPE, "application/json").body(Body::from(body.to_string())).unwrap();
    let (s, _, b) = call(app, req).await;
    (s, b)
}

fn suggestions(body: &[u8]) -> SuggestResponse {
    serde_json::from_slice(body).unwrap()
}

fn words(r: &SuggestResponse) -> Vec<&str> {
    r.suggestions.iter().map(|s| s.word.as_str()).collect()
}

#[tokio::test]
async fn suggest_pages() {
    let app = router(state());
    let (s, ctype, body) = get(&app, "/suggest?q=abc&k=2").await;
    assert_eq!(s, StatusCode::OK);
    assert!(ctype.unwrap().starts_with("application/json"));
    let r = suggestions(&body);
    assert_eq!((r.query.as_str(), r.k), ("abc", 2));
    assert_eq!(words(&r), ["abcd", "abce"]);
    assert!(r.suggestions.iter().all(|s| s.exact));
    assert_eq!(r.suggestions[0].score, 10);
    assert!(r.has_more);

    let r = suggestions(&get(&app, "/suggest?q=abc&k=2&page=1").await.2);
    assert_eq!(words(&r), ["abcdefg"]);
    assert!(!r.has_more);

    let r = suggestions(&get(&app, "/suggest?q=abx&k=3&err=1").await.2);
    assert_eq!(words(&r), ["abcd", "abce", "abcdefg"]);
    assert!(r.suggestions.iter().all(|s| !s.exact));
    let r = suggestions(&get(&app, "/suggest?q=abx&k=3&err=0").await.2);
    assert!(r.suggestions.is_empty());
}

#[tokio::test]
async fn suggest_matches_library() {
    let st = state();
    let app = router(st.clone());
    let (lex, _) = Lexicon::parse("abcd#10\nabce#7\nabcdefg#5\n").unwrap();
    let engine = Engine::build(lex, EngineConfig::default()).unwrap();
    for q in ["a", "ab", "abd", "bcd", "xbc"] {
        let r = suggestions(&get(&app, &format!("/suggest?q={q}&k=5")).await.2);
        let want = engine.complete(q, 5, 1, st.cfg.method, 0).unwrap();
        let want: Vec<&str> = want.suggestions.iter().map(|s| s.word.as_str()).collect();
        assert_eq!(words(&r), want, "{q}");
    }
}

#[tokio::test]
async fn bad_requests() {
    let app = router(state());
    for uri in ["/suggest", "/suggest?q=", "/suggest?q=%20%20", "/suggest?q=abc&k=0", "/suggest?q=abc&k=101", "/suggest?q=abc&k=x", "/suggest?q=abc&err=2", "/suggest?q=abc&page=-1"] {
        assert_eq!(get(&app, uri).await.0, StatusCode::BAD_REQUEST, "{uri}");
    }
}

#[tokio::test]
async fn select_updates_ranking() {
    let app = router(state());
    for expected in 8..=11 {
        let (s, body) = post_select(&app, r#"{"word":"abce"}"#).await;
        assert_eq!(s, StatusCode::OK);
        let r: SelectResponse = serde_json::from_slice(&body).unwrap();
        assert_eq!(r.score, expected);
    }
    let r = suggestions(&get(&app, "/suggest?q=abc&k=2").await.2);
    assert_eq!(words(&r), ["abce", "abcd"]);
    assert_eq!(r.suggestions[0].score, 11);

    assert_eq!(post_select(&app, r#"{"word":"zzz"}"#).await.0, StatusCode::NOT_FOUND);
    assert_eq!(post_select(&app, r#"{"wrd":"abce"}"#).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post_select(&app, "not json").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn health_and_readiness() {
    let app = router(state());
    let (s, _, body) = get(&app, "/health").await;
    assert_eq!(s, StatusCode::OK);
    let h: HealthResponse = serde_json::from_slice(&body).unwrap();
    assert_eq!((h.status.as_str(), h.words, h.build_ms), ("ok", 3, 3));

    let cold = AppState::empty(ServiceConfig::new("unused"));
    let app = router(cold.clone());
    assert_eq!(get(&app, "/health").await.0, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(get(&app, "/suggest?q=abc").await.0, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(post_select(&app, r#"{"word":"abce"}"#).await.0, StatusCode::SERVICE_UNAVAILABLE);
    cold.install(Engine::build(Lexicon::from_words(["abc"]), EngineConfig::default()).unwrap(), 1);
    assert_eq!(get(&app, "/health").await.0, StatusCode::OK);
}

#[tokio::test]
async fn static_files() {
    let app = router(state());
    let (s, ctype, body) = get(&app, "/").await;
    assert_eq!(s, StatusCode::OK);
    assert!(ctype.unwrap().starts_with("text/html"));
    assert!(String::from_utf8(body).unwrap().contains("/assets/app.js"));
    let (s, ctype, _) = get(&app, "/assets/app.js").await;
    assert_eq!(s, StatusCode::OK);
    assert!(ctype.unwrap().contains("javascript"));
    assert_eq!(get(&app, "/nope").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn cors_headers() {
    let app = router(state());
    let req = Request::get("/suggest?q=abc").header(header::ORIGIN, "http://example.test").body(Body::empty()).unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert!(res.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}

#[tokio::test]
async fn concurrent_reads_and_selects() {
    let app = router(state());
    let mut tasks = Vec::new();
    for i in 0..40 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            if i % 4 == 0 {
                post_select(&app, r#"{"word":"abcdefg"}"#).await.0
            } else {
                let (s, _, body) = get(&app, "/suggest?q=abc&k=3").await;
                let r = suggestions(&body);
                // scores along the page never increase, whatever the interleaving
                assert!(r.suggestions.windows(2).all(|p| p[0].score >= p[1].score));
                s
            }
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    let r = suggestions(&get(&app, "/suggest?q=abc&k=1").await.2);
    assert_eq!((r.suggestions[0].word.as_str(), r.suggestions[0].score), ("abcdefg", 15));
}

#[test]
fn config_checks() {
    let mut cfg = ServiceConfig::new("d.txt");
    assert!(cfg.validate().is_ok());
    assert_eq!(cfg.method, Method::Sl3Level);
    cfg.default_k = 0;
    assert!(cfg.validate().is_err());
}
