use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] contract_sched::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("invalid {what}: {message}")]
    Usage { what: &'static str, message: String },

    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.code(),
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "invalid-json",
            CliError::Csv(_) => "csv",
            CliError::Usage { .. } => "usage",
            CliError::VerifyFailed { .. } => "verify-failed",
        }
    }

    /// 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let body = ErrorJson { error: ErrorBody { code: self.code(), message: self.to_string() } };
        serde_json::to_string(&body).expect("error serializes")
    }
}

pub type CliResult<T> = Result<T, CliError>;
