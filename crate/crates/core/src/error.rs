use thiserror::Error;

/// Errors raised by the library.
///
/// `Invariant` is reserved for conditions that can only arise from a bug
/// (a negative Clebsch-Gordan coefficient, a non-constant orbit coefficient,
/// a κ-dependent second-order coefficient, ...). They are reported loudly
/// rather than silently patched over.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),

    #[error("dimension mismatch: expected {expected} components, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at κ = {value}: denominator {denominator} vanishes (factor {factor})")]
    Pole {
        value: String,
        denominator: String,
        factor: String,
    },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn invariant(message: impl Into<String>) -> Self {
        Error::Invariant(message.into())
    }
}
