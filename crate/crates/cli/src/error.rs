use thiserror::Error;

/// Failures of the front end, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] sigma_lab::Error),
}

impl CliError {
    /// Every front-end error is a usage or parse error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
