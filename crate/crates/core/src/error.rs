use thiserror::Error;

/// Errors raised by the library. Divergent integrals are not errors; they
/// surface as `f64::INFINITY` values.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension m = {m} is out of range (need m >= {min})")]
    DimensionRange { m: usize, min: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("exponent p = {p} outside the open interval ({lo}, {hi})")]
    Domain { p: f64, lo: f64, hi: f64 },

    #[error("exponents p = {p} and q = {q} are not conjugate")]
    NonConjugate { p: f64, q: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
