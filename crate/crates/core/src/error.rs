use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter must satisfy q > 1, got {0}")]
    InvalidQ(f64),

    #[error("q-number [{n}]_q overflows f64 for q = {q}; use the log-domain path")]
    Overflow { n: u64, q: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("integrand returned a non-finite value at t = {0}")]
    NonFiniteIntegrand(f64),

    #[error("integration tolerance not met (best estimate {best}, error {error})")]
    ToleranceNotMet { best: f64, error: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
