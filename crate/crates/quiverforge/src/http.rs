//! HTTP service.
//!
//! Every response is `{"ok":true,"result":...}` or `{"ok":false,"error":...}`.
//! The result text is produced by [`render`], the same call the CLI prints,
//! so both front ends emit identical JSON for identical input.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use quiverforge_core::membership::ClassId;
use quiverforge_core::{MutationSequence, VertexId};

use crate::ops::{self, render, BudgetDoc, CertificateDoc, OpError, OpResult, QuiverDoc};
use crate::session::{SessionError, SessionStore};

pub const SESSION_TTL: Duration = Duration::from_secs(60 * 60);

#[derive(Clone)]
pub struct AppState {
    pub sessions: Arc<SessionStore>,
}

impl AppState {
    pub fn new(ttl: Duration) -> Self {
        AppState { sessions: Arc::new(SessionStore::new(ttl)) }
    }
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(SESSION_TTL)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/mutate", post(mutate))
        .route("/api/analyze", post(analyze))
        .route("/api/canon", post(canon))
        .route("/api/search", post(search))
        .route("/api/certify", post(certify))
        .route("/api/checkcert", post(checkcert))
        .route("/api/transform", post(transform))
        .route("/api/session", post(session_create))
        .route("/api/session/{id}", get(session_get))
        .route("/api/session/{id}/mutate", post(session_mutate))
        .route("/api/session/{id}/undo", post(session_undo))
        .with_state(state)
}

pub fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(AppState::default())).await
    })
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn ok_text(result: String) -> Response {
    json(StatusCode::OK, format!("{{\"ok\":true,\"result\":{result}}}"))
}

fn fail(status: StatusCode, message: &str) -> Response {
    json(status, format!("{{\"ok\":false,\"error\":{}}}", render(&message)))
}

fn op_fail(e: &OpError) -> Response {
    let status = StatusCode::from_u16(e.http_status()).expect("valid status");
    fail(status, &e.to_string())
}

fn session_fail(e: &SessionError) -> Response {
    match e {
        SessionError::NotFound(_) => fail(StatusCode::NOT_FOUND, &e.to_string()),
        SessionError::Op(op) => op_fail(op),
    }
}

fn respond(result: OpResult<String>) -> Response {
    match result {
        Ok(text) => ok_text(text),
        Err(e) => op_fail(&e),
    }
}

fn body<T: DeserializeOwned>(text: &str) -> OpResult<T> {
    // an empty body reads as an empty object
    ops::parse(if text.trim().is_empty() { "{}" } else { text })
}

/// Run CPU-bound work off the async executor.
async fn blocking(f: impl FnOnce() -> OpResult<String> + Send + 'static) -> Response {
    match tokio::task::spawn_blocking(f).await {
        Ok(result) => respond(result),
        Err(e) => fail(StatusCode::INTERNAL_SERVER_ERROR, &e.to_string()),
    }
}

async fn health() -> Response {
    json(StatusCode::OK, "{\"ok\":true}".into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepsBody {
    vertex: Option<u32>,
    sequence: Option<Vec<u32>>,
}

impl StepsBody {
    fn steps(&self) -> OpResult<MutationSequence> {
        match (self.vertex, &self.sequence) {
            (Some(v), None) => Ok([VertexId::new(v)].into_iter().collect()),
            (None, Some(seq)) => Ok(seq.iter().map(|&v| VertexId::new(v)).collect()),
            _ => Err(OpError::Malformed("give exactly one of `vertex` and `sequence`".into())),
        }
    }
}

async fn mutate(text: String) -> Response {
    respond((|| {
        // {quiver, vertex|sequence}: peel off the quiver, the rest is a StepsBody
        let mut v: Value = body(&text)?;
        let quiver = v.as_object_mut().and_then(|o| o.remove("quiver"));
        let quiver: QuiverDoc = ops::from_value(quiver.unwrap_or(Value::Null))?;
        let steps: StepsBody = ops::from_value(v)?;
        let q = quiver.build()?;
        Ok(render(&ops::mutate(&q, &steps.steps()?)?))
    })())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverBody {
    quiver: QuiverDoc,
}

async fn analyze(text: String) -> Response {
    respond(body::<QuiverBody>(&text).and_then(|b| Ok(render(&ops::analyze_quiver(&b.quiver.build()?)))))
}

async fn canon(text: String) -> Response {
    respond(body::<QuiverBody>(&text).and_then(|b| Ok(render(&ops::canon(&b.quiver.build()?)))))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchBody {
    quiver: QuiverDoc,
    #[serde(default)]
    budget: BudgetDoc,
}

async fn search(text: String) -> Response {
    blocking(move || {
        let b: SearchBody = body(&text)?;
        let q = b.quiver.build()?;
        Ok(render(&ops::search(&q, &b.budget.build()?)?))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertifyBody {
    quiver: QuiverDoc,
    class: ClassId,
    #[serde(default)]
    budget: BudgetDoc,
}

async fn certify(text: String) -> Response {
    blocking(move || {
        let b: CertifyBody = body(&text)?;
        let q = b.quiver.build()?;
        Ok(render(&ops::certify(&q, b.class, &b.budget.build()?)?))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckBody {
    quiver: QuiverDoc,
    certificate: CertificateDoc,
    class: Option<ClassId>,
}

async fn checkcert(text: String) -> Response {
    blocking(move || {
        let b: CheckBody = body(&text)?;
        let q = b.quiver.build()?;
        let (recorded, cert) = b.certificate.into_parts()?;
        let class = b.class.or(recorded).ok_or_else(|| OpError::Malformed("missing `class`".into()))?;
        Ok(render(&ops::checkcert(&q, &cert, class)))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformBody {
    quiver: QuiverDoc,
    certificate: CertificateDoc,
    to: ClassId,
    from: Option<ClassId>,
}

async fn transform(text: String) -> Response {
    blocking(move || {
        let b: TransformBody = body(&text)?;
        let q = b.quiver.build()?;
        let (recorded, cert) = b.certificate.into_parts()?;
        Ok(render(&ops::transform(&q, &cert, b.from.or(recorded), b.to)?))
    })
    .await
}

async fn session_create(State(state): State<AppState>, text: String) -> Response {
    respond(body::<QuiverBody>(&text).and_then(|b| Ok(render(&state.sessions.create(b.quiver.build()?)))))
}

async fn session_get(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.sessions.get(&id) {
        Ok(rec) => ok_text(render(&rec)),
        Err(e) => session_fail(&e),
    }
}

async fn session_mutate(State(state): State<AppState>, Path(id): Path<String>, text: String) -> Response {
    let steps = match body::<StepsBody>(&text).and_then(|b| b.steps()) {
        Ok(s) => s,
        Err(e) => return op_fail(&e),
    };
    match state.sessions.update(&id, |s| s.mutate(steps)) {
        Ok(rec) => ok_text(render(&rec)),
        Err(e) => session_fail(&e),
    }
}

async fn session_undo(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.sessions.update(&id, |s| s.undo()) {
        Ok(rec) => ok_text(render(&rec)),
        Err(e) => session_fail(&e),
    }
}
