//! HTTP facade over the AHP engine for incremental judgment elicitation.
//!
//! Routes:
//!
//! | method | path                          | body                                   |
//! |--------|-------------------------------|----------------------------------------|
//! | POST   | `/sessions`                   | `{goal, mode, criteria, alternatives}` |
//! | GET    | `/sessions/{id}`              |                                        |
//! | PUT    | `/sessions/{id}/judgments`    | `{matrix, i, j, value}`                |
//! | POST   | `/sessions/{id}/solve`        | `{method}` or `{attitude}` or nothing  |
//! | POST   | `/sessions/{id}/compare`      | `{attitudes: [a, b]}` or nothing       |
//! | GET    | `/sessions/{id}/document`     |                                        |
//! | GET    | `/fixtures/paper-case`        | query `mode=crisp\|fuzzy`              |
//!
//! Errors are `{"error": code, "detail": ...}`.

pub mod error;
pub mod session;

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use fahp_core::store::load_bundled;
use fahp_core::{Mode, Strictness};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub use error::{ApiError, MissingCell};
pub use session::{
    CompareRequest, Completion, IncrementalStatus, JudgmentRequest, NewSession, Session, SessionStore, SessionView,
    SolveRequest,
};

pub fn router(store: SessionStore) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/judgments", put(submit_judgment))
        .route("/sessions/{id}/solve", post(solve_session))
        .route("/sessions/{id}/compare", post(compare_session))
        .route("/sessions/{id}/document", get(export_document))
        .route("/fixtures/paper-case", get(load_fixture))
        .with_state(store)
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(SessionStore::new()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Parses a JSON body; an empty body means the default request.
fn parse_body<T: DeserializeOwned + Default>(body: &Bytes) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    parse_required(body)
}

fn parse_required<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(format!("invalid request body: {e}")))
}

fn json_text(status: StatusCode, body: impl Into<String>) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body.into()).into_response()
}

async fn create_session(State(store): State<SessionStore>, body: Bytes) -> Result<Response, ApiError> {
    let spec: NewSession = parse_required(&body)?;
    let session = Session::new(spec)?;
    let view = session.view();
    log::debug!("created session {}", session.id());
    store.insert(session);
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_session(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let handle = store.get(&id)?;
    let view = handle.lock().expect("session lock").view();
    Ok(Json(view))
}

async fn submit_judgment(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<IncrementalStatus>, ApiError> {
    let req: JudgmentRequest = parse_required(&body)?;
    let handle = store.get(&id)?;
    let status = handle.lock().expect("session lock").submit(&req)?;
    Ok(Json(status))
}

async fn solve_session(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: SolveRequest = parse_body(&body)?;
    let handle = store.get(&id)?;
    let text = handle.lock().expect("session lock").solve(&req)?;
    Ok(json_text(StatusCode::OK, &*text))
}

async fn compare_session(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: CompareRequest = parse_body(&body)?;
    let handle = store.get(&id)?;
    let view = handle.lock().expect("session lock").compare(&req)?;
    Ok(Json(view).into_response())
}

async fn export_document(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let handle = store.get(&id)?;
    let doc = handle.lock().expect("session lock").document();
    Ok(json_text(StatusCode::OK, doc.to_json()))
}

#[derive(Debug, Deserialize)]
struct FixtureQuery {
    mode: Option<Mode>,
}

async fn load_fixture(
    State(store): State<SessionStore>,
    query: Result<Query<FixtureQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let name = match q.mode.unwrap_or(Mode::Crisp) {
        Mode::Crisp => "paper-case-crisp.json",
        Mode::Fuzzy => "paper-case-fuzzy.json",
    };
    let loaded = load_bundled(name, Strictness::Strict).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let session = Session::from_problem(&loaded.problem)?;
    let view = session.view();
    store.insert(session);
    Ok((StatusCode::CREATED, Json(view)).into_response())
}
