use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} is below the optical regime: pi*d/lambda = {ka:.3} < 10")]
    Regime { what: String, ka: f64 },

    #[error("state coincides with primary {primary} (distance {distance:e})")]
    Singularity { primary: &'static str, distance: f64 },

    #[error("integration failed at t = {t_last}: {reason}")]
    Integration { t_last: f64, state: Vec<f64>, reason: String },

    #[error("differential correction diverged after {iterations} iterations (residual {residual:e})")]
    Correction { iterations: usize, residual: f64 },

    #[error("fixed point did not converge after {} iterations", history.len())]
    NonConvergence { history: Vec<f64> },

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("infeasible at {} phase bins (first {:?})", phases.len(), phases.first())]
    Infeasible { phases: Vec<usize> },

    #[error("line {line}: {key}: {message}")]
    Config { line: usize, key: String, message: String },

    #[error("io: {0}")]
    Io(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
