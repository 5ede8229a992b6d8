use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("p = {p} is not prime to d = {d}")]
    NotCoprime { p: u64, d: u64 },

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("operation undefined here: {0}")]
    Domain(String),

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("enumeration budget exceeded: need {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("negative coordinate in p*u - v: u = {u:?}, v = {v:?}")]
    NegativeCoordinate { u: Vec<u32>, v: Vec<u32> },

    #[error("polygon lengths differ: {0} vs {1}")]
    LengthMismatch(u64, u64),

    #[error("leading form is not smooth")]
    NotSmooth,

    #[error("division by {divisor} is not exact in Z[zeta_p] at coefficient {index}")]
    InexactDivision { divisor: u64, index: usize },

    #[error("{k} is not a Frobenius vertex")]
    NotFrobeniusVertex { k: u64 },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("sampling gave up after {0} attempts")]
    RetryCapExhausted(u32),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::GuardExceeded(_) => 3,
            Error::Io { .. } | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
