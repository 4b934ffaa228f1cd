use std::path::PathBuf;

use bonnetlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("schema: {0}")]
    Schema(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit codes. These are part of the command-line contract.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const CONFORMALITY: i32 = 2;
    pub const SCHEMA: i32 = 3;
    pub const REFUSED: i32 = 4;
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Json { .. } | Error::Schema(_) | Error::Usage(_) => exit::SCHEMA,
            Error::Core(e) => match e {
                CoreError::ConformalityViolation { .. } => exit::CONFORMALITY,
                CoreError::NotCmc { .. }
                | CoreError::TotallyUmbilic
                | CoreError::NotACandidatePair { .. } => exit::REFUSED,
                CoreError::InvalidGrid(_)
                | CoreError::SpectralOnNonPeriodic(_)
                | CoreError::FieldLength { .. }
                | CoreError::UnknownGalleryEntry(_)
                | CoreError::InvalidParameter { .. }
                | CoreError::DegenerateImmersion { .. }
                | CoreError::NonFinite { .. } => exit::SCHEMA,
                _ => exit::OTHER,
            },
        }
    }
}
