use thiserror::Error;

/// Coarse classification used by the CLI exit codes and HTTP status mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or violated invariant.
    Validation,
    /// A well-formed request that cannot be satisfied (budget, guard limits).
    Infeasible,
    /// I/O failures and other unexpected conditions.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("distributions have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("distribution has zero mass")]
    ZeroMass,

    #[error("spec does not match city: {0}")]
    SpecMismatch(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("oracle refused: instance {width}x{height} with budget {budget} exceeds the 5x5 grid / budget 12 guard")]
    OracleGuard {
        width: usize,
        height: usize,
        budget: usize,
    },

    #[error("unsupported spec for surrogate planning: {0} has no per-cell decomposition")]
    UnsupportedSpec(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::UnknownAttribute(_)
            | Error::LengthMismatch(..)
            | Error::ZeroMass
            | Error::SpecMismatch(_)
            | Error::InvalidPath(_)
            | Error::UnsupportedSpec(_) => ErrorKind::Validation,
            Error::Infeasible(_) | Error::OracleGuard { .. } => ErrorKind::Infeasible,
            Error::Io(_) => ErrorKind::Internal,
        }
    }

    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
