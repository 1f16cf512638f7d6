use mns::MnsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    CircuitFile(String),
    #[error(transparent)]
    Library(#[from] MnsError),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::CircuitFile(_) => 4,
            CliError::Library(e) => match e {
                MnsError::InvalidDimension(_)
                | MnsError::Shape(_)
                | MnsError::Domain { .. }
                | MnsError::InvalidParameter(_)
                | MnsError::Normalization { .. }
                | MnsError::NotUnitary(_)
                | MnsError::Parity(_)
                | MnsError::Cutoff { .. }
                | MnsError::DegenerateInput(_) => 3,
                MnsError::Parse { .. } => 4,
                _ => 5,
            },
            CliError::Output(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "invalid-parameter",
            4 => "circuit-file",
            5 => "computation",
            _ => "output",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
