use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("non-finite integrand value at x = {0}")]
    NonFiniteIntegrand(f64),

    #[error("bin underflow: bin {bin} has {count} points, need at least {min}")]
    BinUnderflow { bin: usize, count: usize, min: usize },

    #[error("root bracket failure: {0}")]
    RootBracket(String),

    #[error("oracle mismatch for {what}: {first} vs {second}")]
    OracleMismatch { what: String, first: f64, second: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
