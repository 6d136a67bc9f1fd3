//! Crate-wide error type.

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input violates a mathematical or physical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A design target cannot be met by any positive geometry.
    #[error("infeasible design: {0}")]
    Infeasible(String),

    /// Point data does not determine the requested geometric fit.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Inconsistent configuration of an operation (mismatched lengths,
    /// duplicate resonances, missing metadata, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A file could not be parsed; `line` is 1-based.
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Iterative fit ran out of iterations. Carries the last iterate so the
    /// caller can inspect how far the fit got.
    #[error("fit did not converge after {iterations} iterations (rss = {rss:.6e}, last params = {params:?})")]
    FitNonConvergence {
        iterations: usize,
        rss: f64,
        params: Vec<f64>,
    },

    /// Filesystem failure with the path that caused it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
