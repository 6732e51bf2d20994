use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced anywhere in the fitting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Gamma pole at z = {z}")]
    Pole { z: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator elements belong to different groups: {0}")]
    Mismatch(String),

    #[error("composition left the carrier: {lhs} and {rhs} produced {result}")]
    Closure { lhs: i64, rhs: i64, result: i64 },

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("design matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("observed values have zero variance; R² is undefined")]
    Degenerate,

    #[error("empty input: {0}")]
    Empty(String),

    #[error("no records for region {region:?} and type {avocado_type}")]
    EmptySelection {
        region: String,
        avocado_type: String,
    },

    #[error("schema error{}: {message}", row.map(|r| format!(" at row {r}")).unwrap_or_default())]
    Schema { row: Option<usize>, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numeric,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn schema(row: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Schema {
            row,
            message: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. }
            | Error::Schema { .. }
            | Error::EmptySelection { .. }
            | Error::Empty(_)
            | Error::Degenerate => ErrorClass::Data,
            Error::NotPrime(_) => ErrorClass::Usage,
            Error::Pole { .. }
            | Error::Domain(_)
            | Error::Mismatch(_)
            | Error::Closure { .. }
            | Error::NotAGroup(_)
            | Error::RankDeficient { .. } => ErrorClass::Numeric,
        }
    }

    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain(_) => "domain",
            Error::Mismatch(_) => "mismatch",
            Error::Closure { .. } => "closure",
            Error::NotPrime(_) => "not-prime",
            Error::NotAGroup(_) => "not-a-group",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::Degenerate => "degenerate",
            Error::Empty(_) => "empty",
            Error::EmptySelection { .. } => "empty-selection",
            Error::Schema { .. } => "schema",
            Error::Io { .. } => "io",
        }
    }
}
