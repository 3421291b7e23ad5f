//! HTTP lookup service for word complexity, backed by the result store.
//!
//! Routes:
//!
//! * `GET /complexity/{word}` (alias `GET /complexity-of-{word}`) -
//!   cached or freshly computed `{word, n, b, a_n, d, code}`;
//! * `GET /table/{n}`: exact positive-deficiency row for small `n`;
//! * `GET /health`: status plus cache statistics.
//!
//! Identical concurrent requests are deduplicated: one computation runs,
//! the rest await its result.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::{StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::json;
use tokio::sync::OnceCell;

use autoplexity::experiments::{exhaustive_table_row, TableRow};
use autoplexity::search::{deficiency, DeficiencyRecord};
use autoplexity::store::{parse_word, Store};
use autoplexity::words::Word;

/// Service limits; the length cap keeps request cost bounded since the
/// search is exponential in word length.
#[derive(Clone, Copy, Debug)]
pub struct ServiceConfig {
    pub max_word_len: usize,
    pub max_table_n: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { max_word_len: 20, max_table_n: 12 }
    }
}

type ComputeFn = dyn Fn(&Word) -> DeficiencyRecord + Send + Sync;

pub struct AppState {
    store: Store,
    config: ServiceConfig,
    compute: Box<ComputeFn>,
    inflight: Mutex<HashMap<String, Arc<OnceCell<DeficiencyRecord>>>>,
    table_cells: Mutex<HashMap<usize, Arc<OnceCell<TableRow>>>>,
    computations: AtomicU64,
    error_ids: AtomicU64,
}

impl AppState {
    pub fn new(store: Store, config: ServiceConfig) -> Arc<Self> {
        Self::with_compute(store, config, Box::new(deficiency))
    }

    /// Test seam: swap out the computation while keeping the caching
    /// and deduplication machinery.
    pub fn with_compute(store: Store, config: ServiceConfig, compute: Box<ComputeFn>) -> Arc<Self> {
        Arc::new(AppState {
            store,
            config,
            compute,
            inflight: Mutex::new(HashMap::new()),
            table_cells: Mutex::new(HashMap::new()),
            computations: AtomicU64::new(0),
            error_ids: AtomicU64::new(0),
        })
    }

    /// Number of times the underlying computation actually ran.
    pub fn computations(&self) -> u64 {
        self.computations.load(Ordering::Relaxed)
    }

    fn opaque_error_id(&self) -> String {
        let seq = self.error_ids.fetch_add(1, Ordering::Relaxed);
        format!("e{:08x}-{seq}", std::process::id())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/complexity/{word}", get(complexity))
        .route("/table/{n}", get(table))
        .route("/health", get(health))
        .fallback(complexity_alias)
        .with_state(state)
}

enum ServiceError {
    BadWord(String),
    TooLong { len: usize, limit: usize },
    NotFound(String),
    Internal(String),
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ServiceError::BadWord(msg) => (StatusCode::BAD_REQUEST, json!({ "error": msg })),
            ServiceError::TooLong { len, limit } => (
                StatusCode::PAYLOAD_TOO_LARGE,
                json!({ "error": format!("word length {len} exceeds the limit {limit}") }),
            ),
            ServiceError::NotFound(msg) => (StatusCode::NOT_FOUND, json!({ "error": msg })),
            ServiceError::Internal(id) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({ "error": "internal error", "id": id }),
            ),
        };
        (status, Json(body)).into_response()
    }
}

fn validate_word(state: &AppState, text: &str) -> Result<Word, ServiceError> {
    let word = parse_word(text)
        .map_err(|e| ServiceError::BadWord(format!("malformed word {text:?}: {e}")))?;
    if word.sigma() > 3 {
        return Err(ServiceError::BadWord(format!(
            "word {text:?} uses letters outside {{0,1,2}}"
        )));
    }
    if word.len() > state.config.max_word_len {
        return Err(ServiceError::TooLong { len: word.len(), limit: state.config.max_word_len });
    }
    Ok(word)
}

async fn lookup(state: Arc<AppState>, text: String) -> Result<Json<DeficiencyRecord>, ServiceError> {
    let word = validate_word(&state, &text)?;
    let key = word.to_string();
    if let Some(entry) = state.store.get(&key) {
        return Ok(Json(entry.to_record()));
    }

    let cell = {
        let mut inflight = state.inflight.lock().unwrap();
        inflight.entry(key.clone()).or_default().clone()
    };
    let result = cell
        .get_or_try_init(|| {
            let state = state.clone();
            let word = word.clone();
            async move {
                let record = tokio::task::spawn_blocking({
                    let state = state.clone();
                    move || {
                        state.computations.fetch_add(1, Ordering::Relaxed);
                        (state.compute)(&word)
                    }
                })
                .await
                .map_err(|e| ServiceError::Internal(format!("{} ({e})", state.opaque_error_id())))?;
                let entry = autoplexity::store::CacheEntry {
                    word: record.word.clone(),
                    n: record.n,
                    a_n: record.a_n,
                    code: record.code.clone(),
                };
                if let Err(err) = state.store.put(entry) {
                    eprintln!("service: failed to cache {}: {err}", record.word);
                }
                Ok::<_, ServiceError>(record)
            }
        })
        .await.cloned();
    state.inflight.lock().unwrap().remove(&key);
    result.map(Json)
}

async fn complexity(
    State(state): State<Arc<AppState>>,
    Path(word): Path<String>,
) -> Result<Json<DeficiencyRecord>, ServiceError> {
    lookup(state, word).await
}

/// Mirrors the `/complexity-of-⟨word⟩` URL shape.
async fn complexity_alias(
    State(state): State<Arc<AppState>>,
    uri: Uri,
) -> Result<Json<DeficiencyRecord>, ServiceError> {
    let path = uri.path().trim_start_matches('/');
    match path.strip_prefix("complexity-of-") {
        Some(word) => lookup(state, word.to_string()).await,
        None => Err(ServiceError::NotFound(format!("no route for /{path}"))),
    }
}

async fn table(
    State(state): State<Arc<AppState>>,
    Path(n): Path<usize>,
) -> Result<Json<TableRow>, ServiceError> {
    if n > state.config.max_table_n {
        return Err(ServiceError::NotFound(format!(
            "table row {n} not computed (limit {})",
            state.config.max_table_n
        )));
    }
    let cell = {
        let mut cells = state.table_cells.lock().unwrap();
        cells.entry(n).or_default().clone()
    };
    let row = cell
        .get_or_try_init(|| async move {
            tokio::task::spawn_blocking(move || exhaustive_table_row(n))
                .await
                .map_err(|e| ServiceError::Internal(format!("{} ({e})", state.opaque_error_id())))
        })
        .await?
        .clone();
    Ok(Json(row))
}

async fn health(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(json!({
        "status": "ok",
        "cache_entries": state.store.len(),
        "computations": state.computations(),
    }))
}

/// Binds and serves until the process exits.
pub async fn serve(addr: std::net::SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use tower::ServiceExt;

    async fn get_json(router: &Router, path: &str) -> (StatusCode, serde_json::Value) {
        let response = router
            .clone()
            .oneshot(Request::builder().uri(path).body(Body::empty()).unwrap())
            .await
            .unwrap();
        let status = response.status();
        let bytes = response.into_body().collect().await.unwrap().to_bytes();
        let value = serde_json::from_slice(&bytes).unwrap();
        (status, value)
    }

    fn test_router() -> (Router, Arc<AppState>) {
        let state = AppState::new(Store::in_memory(), ServiceConfig::default());
        (router(state.clone()), state)
    }

    #[tokio::test]
    async fn complexity_endpoint() {
        let (app, _) = test_router();
        let (status, body) = get_json(&app, "/complexity/00000").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["a_n"], 1);
        assert_eq!(body["b"], 3);
        assert_eq!(body["d"], 2);

        let (status, body) = get_json(&app, "/complexity/01").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["a_n"], 2);
        assert_eq!(body["d"], 0);

        let (status, body) = get_json(&app, "/complexity/012012").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["n"], 6);
        assert!(body["a_n"].as_u64().unwrap() >= 1);
    }

    #[tokio::test]
    async fn alias_route() {
        let (app, _) = test_router();
        let (status, body) = get_json(&app, "/complexity-of-010").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["word"], "010");
        assert_eq!(body["a_n"], 2);

        let (status, _) = get_json(&app, "/unknown").await;
        assert_eq!(status, StatusCode::NOT_FOUND);
    }

    #[tokio::test]
    async fn validation_errors() {
        let (app, _) = test_router();
        let (status, _) = get_json(&app, "/complexity/01a1").await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        let (status, _) = get_json(&app, "/complexity/0123").await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        let (status, _) = get_json(&app, "/complexity/010101010101010101010101").await;
        assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    }

    #[tokio::test]
    async fn table_endpoint() {
        let (app, _) = test_router();
        let (status, body) = get_json(&app, "/table/3").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["probability"], "0.250");
        let (status, body) = get_json(&app, "/table/2").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["probability"], "0.500");
        let (status, _) = get_json(&app, "/table/30").await;
        assert_eq!(status, StatusCode::NOT_FOUND);
    }

    #[tokio::test]
    async fn health_endpoint() {
        let (app, _) = test_router();
        let (status, body) = get_json(&app, "/health").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["status"], "ok");
        assert_eq!(body["cache_entries"], 0);
    }

    #[tokio::test]
    async fn responses_are_byte_identical() {
        let (app, _) = test_router();
        let first = app
            .clone()
            .oneshot(Request::builder().uri("/complexity/0110").body(Body::empty()).unwrap())
            .await
            .unwrap();
        let first = first.into_body().collect().await.unwrap().to_bytes();
        let second = app
            .clone()
            .oneshot(Request::builder().uri("/complexity/0110").body(Body::empty()).unwrap())
            .await
            .unwrap();
        let second = second.into_body().collect().await.unwrap().to_bytes();
        assert_eq!(first, second);
    }

    #[tokio::test(flavor = "multi_thread", worker_threads = 4)]
    async fn concurrent_requests_compute_once() {
        let state = AppState::with_compute(
            Store::in_memory(),
            ServiceConfig::default(),
            Box::new(|word| {
                // Slow enough that the eight requests overlap.
                std::thread::sleep(std::time::Duration::from_millis(100));
                deficiency(word)
            }),
        );
        let app = router(state.clone());
        let mut handles = Vec::new();
        for _ in 0..8 {
            let app = app.clone();
            handles.push(tokio::spawn(async move {
                let response = app
                    .oneshot(
                        Request::builder().uri("/complexity/010011").body(Body::empty()).unwrap(),
                    )
                    .await
                    .unwrap();
                assert_eq!(response.status(), StatusCode::OK);
            }));
        }
        for handle in handles {
            handle.await.unwrap();
        }
        assert_eq!(state.computations(), 1);
    }
}
