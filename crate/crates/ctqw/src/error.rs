use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ctqw_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input or IO, 2 when the numerics themselves fail.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if is_numerical(e) => 2,
            _ => 1,
        }
    }
}

fn is_numerical(e: &ctqw_core::Error) -> bool {
    use ctqw_core::Error as E;
    match e {
        E::NoConvergence { .. } | E::ImaginaryResidue(_) => true,
        E::Realization { reason, .. } => is_numerical(reason),
        _ => false,
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
