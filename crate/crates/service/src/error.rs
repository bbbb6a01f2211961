use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use fahp_core::{EngineError, MatrixSelector};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

/// An upper-triangle cell that has no judgment yet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MissingCell {
    pub matrix: MatrixSelector,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("no session with id {0:?}")]
    UnknownSession(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("unknown matrix {0}")]
    UnknownMatrix(String),
    #[error("cell ({i}, {j}) is not in the upper triangle of an order-{n} matrix")]
    LowerTriangleRejected { i: usize, j: usize, n: usize },
    #[error("{0}")]
    CellOutOfRange(String),
    #[error("{} judgments are still missing", .0.len())]
    IncompleteJudgments(Vec<MissingCell>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl ApiError {
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "unknown_session",
            ApiError::BadRequest(_) => "bad_request",
            ApiError::UnknownMatrix(_) => "unknown_matrix",
            ApiError::LowerTriangleRejected { .. } => "lower_triangle_rejected",
            ApiError::CellOutOfRange(_) => "cell_out_of_range",
            ApiError::IncompleteJudgments(_) => "incomplete_judgments",
            ApiError::Engine(EngineError::ModeMismatch { .. }) => "mode_mismatch",
            ApiError::Engine(_) => "engine_error",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::IncompleteJudgments(_) => StatusCode::CONFLICT,
            ApiError::UnknownMatrix(_)
            | ApiError::LowerTriangleRejected { .. }
            | ApiError::CellOutOfRange(_)
            | ApiError::Engine(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    fn detail(&self) -> Value {
        match self {
            ApiError::IncompleteJudgments(missing) => json!({ "message": self.to_string(), "missing": missing }),
            other => Value::String(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.code(), "detail": self.detail() });
        (self.status(), Json(body)).into_response()
    }
}
