//! HTTP service for building queries interactively.
//!
//! Each client works in a session holding one ontology and one query graph.
//! Every graph mutation answers with the updated graph, its diagnostics and,
//! when the graph is valid, the SPARQL it translates to. Execution runs
//! against a registry store loaded once at startup and shared by all
//! sessions.

pub mod api;
mod error;
mod session;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::routing::{get, post};
use axum::Router;
use oqb_core::{GraphError, TripleStore, DEFAULT_NODE_CAP};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use session::{Session, Sessions};

#[derive(Debug, Clone)]
pub struct Config {
    /// Node cap for new session graphs.
    pub node_cap: usize,
    /// Idle time after which a session is dropped.
    pub session_ttl: Duration,
    /// Static files served under `/`, typically the UI bundle.
    pub assets: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { node_cap: DEFAULT_NODE_CAP, session_ttl: Duration::from_secs(3600), assets: None }
    }
}

#[derive(Debug)]
pub struct AppState {
    pub config: Config,
    pub registry: Arc<TripleStore>,
    pub sessions: Sessions,
}

impl AppState {
    pub fn new(config: Config, registry: TripleStore) -> Result<Self, GraphError> {
        if config.node_cap == 0 {
            return Err(GraphError::InvalidCap);
        }
        let sessions = Sessions::new(config.session_ttl);
        Ok(AppState { config, registry: Arc::new(registry), sessions })
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let assets = state.config.assets.clone();
    let api = Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(api::create_session))
        .route("/sessions/{id}", axum::routing::delete(api::delete_session))
        .route("/sessions/{id}/ontology", post(api::upload_ontology))
        .route("/sessions/{id}/catalog", get(api::get_catalog))
        .route("/sessions/{id}/graph", get(api::get_graph).post(api::mutate_graph))
        .route("/sessions/{id}/sparql", get(api::get_sparql))
        .route("/sessions/{id}/execute", post(api::execute))
        .route("/sessions/{id}/document", get(api::save_document).post(api::load_document))
        .route("/sessions/{id}/export", get(api::export));
    let app = Router::new().nest("/api", api).with_state(state);
    match assets {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Serves `router(state)` on an already bound listener until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Arc<AppState>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}
