//! Errors reported as JSON on stdout.

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path} is not valid JSON: {message}")]
    Json { path: String, message: String },
    #[error("{path} does not match the {schema} schema")]
    Schema { path: String, schema: &'static str, violations: Vec<String> },
    #[error("{0}")]
    Invalid(String),
    /// A numerical check failed; `record` holds the offending values.
    #[error("{message}")]
    Check { message: String, record: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check { .. } => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "json",
            CliError::Schema { .. } => "schema",
            CliError::Invalid(_) => "invalid",
            CliError::Check { .. } => "check_failure",
        }
    }

    pub fn to_json(&self) -> String {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Schema { violations, .. } => body["violations"] = json!(violations),
            CliError::Check { record, .. } => body["record"] = record.clone(),
            _ => {}
        }
        serde_json::to_string_pretty(&json!({ "error": body })).expect("plain JSON")
    }
}

pub fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}
