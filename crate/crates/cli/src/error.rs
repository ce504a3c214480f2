use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Compute(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

impl From<fracpr::Error> for CliError {
    fn from(e: fracpr::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}
