use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use oqb_core::{Diagnostic, GraphError, OntologyError, PersistError, TranslateError};
use serde::Serialize;
use thiserror::Error;

/// Every failure a handler can report. Rendered as
/// `{"error": {"code", "message", "diagnostics"}}`.
#[derive(Debug, Error)]
pub enum ApiError {
    #[error("no session {0}")]
    SessionNotFound(String),
    #[error("no ontology uploaded for this session")]
    OntologyMissing,
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error("query graph failed validation")]
    ValidationFailed(Vec<Diagnostic>),
    #[error("the graph is empty; there is nothing to save")]
    EmptyGraph,
}

impl From<TranslateError> for ApiError {
    fn from(e: TranslateError) -> Self {
        ApiError::ValidationFailed(e.diagnostics().to_vec())
    }
}

impl ApiError {
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::SessionNotFound(_) => "SESSION_NOT_FOUND",
            ApiError::OntologyMissing => "ONTOLOGY_MISSING",
            ApiError::BadRequest(_) => "BAD_REQUEST",
            ApiError::Ontology(e) => e.code(),
            ApiError::Graph(e) => e.code(),
            ApiError::Persist(e) => e.code(),
            ApiError::ValidationFailed(_) => "VALIDATION_FAILED",
            ApiError::EmptyGraph => "EMPTY_GRAPH",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::SessionNotFound(_) => StatusCode::NOT_FOUND,
            ApiError::OntologyMissing => StatusCode::CONFLICT,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    code: &'a str,
    message: String,
    diagnostics: &'a [Diagnostic],
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let diagnostics = match &self {
            ApiError::ValidationFailed(d) => d.as_slice(),
            _ => &[],
        };
        let body = ErrorBody { error: ErrorDetail { code: self.code(), message: self.to_string(), diagnostics } };
        (self.status(), Json(body)).into_response()
    }
}
