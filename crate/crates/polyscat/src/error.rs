use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map onto the failure classes of the pipeline: invalid inputs,
/// singular linear systems, infeasible reconstruction problems, quadrature
/// budgets that could not reach the requested tolerance, and plain I/O or
/// format errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("infeasible: {message} (residual {residual:.3e})")]
    Infeasible { message: String, residual: f64 },

    #[error("tolerance unreachable: achieved {achieved:.3e}, requested {requested:.3e}")]
    TolUnreachable { achieved: f64, requested: f64 },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
