use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("numerical quality failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<xwave_core::Error> for CliError {
    fn from(e: xwave_core::Error) -> Self {
        use xwave_core::Error as E;
        match e {
            E::Domain(_) | E::UnsupportedOrder { .. } | E::InvalidConfig(_) => CliError::Config(e.to_string()),
            E::NonFinite { .. } | E::Accuracy { .. } | E::Truncation { .. } | E::Resolution { .. } | E::Degenerate(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
