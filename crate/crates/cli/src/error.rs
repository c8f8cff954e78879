use std::fmt;

use coherence::Error;

/// Failure of a command, grouped by exit status.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
    /// Every training run diverged.
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Diverged(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Data(_) => "data",
            CliError::Diverged(_) => "diverged",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Data(m) | CliError::Diverged(m) => m,
        }
    }

    /// One line of JSON for standard error.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.message(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => CliError::Config(e.to_string()),
            Error::TrainingDiverged { .. } => CliError::Diverged(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
