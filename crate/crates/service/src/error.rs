use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use fairnav_core::Error;
use serde::Serialize;

/// JSON error body: `{"error": message, "field": path?}`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
    pub field: Option<String>,
}

#[derive(Serialize)]
struct Body<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
}

impl ApiError {
    pub fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            field: None,
        }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("unknown {what} `{id}`"))
    }

    /// Map a core error. Plain validation failures get `status`; parse
    /// errors keep 400 and carry the offending field.
    pub fn from_core(e: Error, status: StatusCode) -> Self {
        match e {
            Error::Parse { field, message } => ApiError {
                status: StatusCode::BAD_REQUEST,
                message: format!("{field}: {message}"),
                field: Some(field),
            },
            Error::Io(_) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
            Error::Infeasible(_) | Error::OracleGuard { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
            }
            other => ApiError::new(status, other.to_string()),
        }
    }

    pub fn body_parse(e: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let field = e.path().to_string();
        let message = e.into_inner().to_string();
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: format!("{field}: {message}"),
            field: Some(field),
        }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            error: &self.message,
            field: self.field.as_deref(),
        };
        (self.status, Json(body)).into_response()
    }
}
