//! Stateless HTTP facade.
//!
//! | route | body | success |
//! |---|---|---|
//! | `POST /api/generate` | design JSON | mesh (base64 STL), diagnostics, bend, metrics |
//! | `POST /api/bend` | `{s0, s1, r, h0?}` | bend prediction |
//! | `GET /api/presets` | | the 15 named presets |
//! | `GET /healthz` | | `{"status": "ok"}` |
//!
//! Failures carry `{"errors": [{"field"?, "message"}]}`: 400 for bodies that
//! do not parse into the request type, 413 past [`BODY_LIMIT`], 422 for
//! designs or inputs the kernel rejects, 500 for internal faults.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine as _;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use telefold_core::bend::{solve_tilted_cone, BendInputs, BendPrediction};
use telefold_core::design::{preset, preset_names, DesignParams, Violation};
use telefold_core::sweep::SweepError;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::pipeline::{generate, GenerateSummary, PipelineError};

/// Request and response size cap, in bytes.
pub const BODY_LIMIT: usize = 20 * 1024 * 1024;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Origin allowed by CORS; any origin when `None`.
    pub allowed_origin: Option<HeaderValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub params: DesignParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub errors: Vec<ApiError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateResponse {
    /// Binary STL, base64 encoded.
    pub mesh: String,
    #[serde(flatten)]
    pub summary: GenerateSummary,
}

struct Failure(StatusCode, Vec<ApiError>);

impl Failure {
    fn message(status: StatusCode, message: impl ToString) -> Self {
        Self(status, vec![ApiError { field: None, message: message.to_string() }])
    }

    fn violations(v: Vec<Violation>) -> Self {
        let errors = v
            .into_iter()
            .map(|v| ApiError { message: format!("{} (got {})", v.constraint, v.value), field: Some(v.field) })
            .collect();
        Self(StatusCode::UNPROCESSABLE_ENTITY, errors)
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { errors: self.1 })).into_response()
    }
}

impl From<BytesRejection> for Failure {
    fn from(r: BytesRejection) -> Self {
        Self::message(r.status(), r.body_text())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Sweep(SweepError::Solid(_) | SweepError::Bend(_)) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        Self::message(status, e)
    }
}

fn parse<T: DeserializeOwned>(body: Result<Bytes, BytesRejection>) -> Result<T, Failure> {
    serde_json::from_slice(&body?).map_err(|e| Failure::message(StatusCode::BAD_REQUEST, e))
}

#[derive(Clone)]
struct AppState {
    /// The preset table, serialized once at startup.
    presets: Bytes,
}

pub fn presets() -> Vec<Preset> {
    preset_names()
        .into_iter()
        .map(|name| {
            let params = preset(&name).expect("listed presets exist");
            Preset { name, params }
        })
        .collect()
}

async fn handle_generate(body: Result<Bytes, BytesRejection>) -> Result<Json<GenerateResponse>, Failure> {
    let params: DesignParams = parse(body)?;
    let design = params.validate().map_err(Failure::violations)?;
    let generated = tokio::task::spawn_blocking(move || generate(&design))
        .await
        .map_err(|e| Failure::message(StatusCode::INTERNAL_SERVER_ERROR, e))??;
    // Base64 grows the payload by a third.
    if generated.stl.len().div_ceil(3) * 4 > BODY_LIMIT {
        return Err(Failure::message(StatusCode::PAYLOAD_TOO_LARGE, "generated mesh exceeds the response size cap"));
    }
    let mesh = base64::engine::general_purpose::STANDARD.encode(&generated.stl);
    Ok(Json(GenerateResponse { mesh, summary: generated.summary }))
}

async fn handle_bend(body: Result<Bytes, BytesRejection>) -> Result<Json<BendPrediction>, Failure> {
    let inputs: BendInputs = parse(body)?;
    solve_tilted_cone(&inputs).map(Json).map_err(|e| Failure::message(StatusCode::UNPROCESSABLE_ENTITY, e))
}

async fn handle_presets(State(state): State<AppState>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.presets).into_response()
}

async fn healthz() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

pub fn router(cfg: &ServiceConfig) -> Router {
    let origin = cfg.allowed_origin.clone().map_or_else(AllowOrigin::any, AllowOrigin::exact);
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/generate", post(handle_generate))
        .route("/api/bend", post(handle_bend))
        .route("/api/presets", get(handle_presets))
        .route("/healthz", get(healthz))
        .with_state(AppState { presets: Bytes::from(serde_json::to_vec(&presets()).expect("presets serialize")) })
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .layer(cors)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, cfg: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(&cfg)).await
}
