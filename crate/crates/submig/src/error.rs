//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid user-supplied configuration (bad parameter combinations,
    /// malformed config files, out-of-range sizes).
    #[error("configuration error: {0}")]
    Config(String),

    /// A mathematical function was evaluated outside its domain
    /// (e.g. a Hankel function at a non-positive argument).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid geometry (self-intersecting arc, cusp, degenerate sample).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The boundary-integral solver failed (ill-conditioned system,
    /// non-convergent factorization).
    #[error("solver failure: {0}")]
    Solver(String),

    /// A numerical procedure failed to reach its accuracy target
    /// (quadrature non-convergence, SVD failure).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// File-system level failure while writing or reading artifacts.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
