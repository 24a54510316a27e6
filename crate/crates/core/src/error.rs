use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("table too small: need k <= {k}, l <= {ell}, have k <= {k_max}, l <= {l_max}")]
    TableTooSmall {
        k: usize,
        ell: i64,
        k_max: usize,
        l_max: i64,
    },

    #[error("inexact division in {context}")]
    InexactDivision { context: String },

    #[error("singular linear system in {context}")]
    SingularSystem { context: String },

    #[error("nonzero residual at z^{index} in {context}")]
    NonzeroResidual { context: String, index: usize },

    #[error("zero denominator in {context}")]
    ZeroDenominator { context: String },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
