use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("monomial of degree {degree} queried above truncation {truncation}")]
    AboveTruncation { degree: usize, truncation: usize },

    #[error("series has nonzero constant term {0}")]
    NonzeroConstant(String),

    #[error("series has constant term {0}, expected 1")]
    ConstantNotOne(String),

    #[error("monomial {0} mixes generators")]
    MixedGenerators(String),

    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCap { requested: usize, cap: usize },

    #[error("invalid json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
