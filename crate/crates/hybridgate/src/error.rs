use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or command-line input. The message names the key.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Compute(#[from] hybridgate_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    /// Wraps a core error raised while validating `key`.
    pub fn at_key(key: &str, err: hybridgate_core::Error) -> Self {
        if err.is_numerical() {
            CliError::Compute(err)
        } else {
            CliError::Config(format!("{key}: {err}"))
        }
    }

    /// 2 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}
