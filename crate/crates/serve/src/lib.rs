//! `POST /compile` with `{spec, options}` returns `{svg, diagnostics, durationMs}`,
//! the same shape the editor uses for in-process compiles.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use tvl_core::compile::{CompileRequest, CompileResponse, Compiler};

pub fn app(data_dir: Option<PathBuf>) -> Router {
    let compiler = Arc::new(Compiler { base_dir: data_dir, ..Compiler::default() });
    Router::new()
        .route("/compile", post(compile))
        .route("/palette.svg", get(palette))
        .route("/health", get(|| async { "ok" }))
        .with_state(compiler)
}

async fn compile(
    State(compiler): State<Arc<Compiler>>,
    Json(req): Json<CompileRequest>,
) -> Result<Json<CompileResponse>, (StatusCode, String)> {
    tokio::task::spawn_blocking(move || compiler.handle(&req))
        .await
        .map(Json)
        .map_err(|e| (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn palette() -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "image/svg+xml")], tvl_core::render::palette_svg(96.0))
}
