use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `pointer` is a JSON pointer into the spec document; empty for the
    /// document root.
    #[error("invalid spec at `{pointer}`: {message}")]
    Spec { pointer: String, message: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("numerical guard failed: {0}")]
    Numeric(#[from] hopfflow_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for spec errors, 3 for numerical guards, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec { .. } | CliError::UnknownPreset(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}
