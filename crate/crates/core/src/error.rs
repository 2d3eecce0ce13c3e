use std::path::PathBuf;

use crate::grid::Space;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field is in {found:?} representation, expected {expected:?}")]
    Representation { expected: Space, found: Space },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dyadic scale {n} outside resolvable range [{lo:.4e}, {hi:.4e}]")]
    DyadicRange { n: f64, lo: f64, hi: f64 },
    #[error("boundary contamination: {0}")]
    Boundary(String),
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("non-finite values at t = {t}")]
    NonFinite { t: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("format: {0}")]
    Format(String),
}

impl Error {
    /// True for failures caused by the caller's input rather than the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::Representation { .. }
                | Error::InvalidParams(_)
                | Error::InvalidInput(_)
                | Error::DyadicRange { .. }
                | Error::Config(_)
                | Error::Format(_)
                | Error::Io { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
