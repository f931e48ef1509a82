use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Invariant(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Budget(_) => "budget",
            CliError::Invariant(_) => "invariant",
            CliError::Io(_) => "io",
        }
    }

    pub fn record(&self) -> Value {
        json!({
            "schema": 1,
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "status": self.status(),
            }
        })
    }
}
