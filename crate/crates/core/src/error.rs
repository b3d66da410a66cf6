use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive computation would exceed its configured bound.
    #[error("resource limit: {what} needs {needed}, bound is {bound}{}", hint.as_deref().map(|h| format!(" ({h})")).unwrap_or_default())]
    ResourceLimit {
        what: String,
        needed: u128,
        bound: u128,
        hint: Option<String>,
    },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn limit(what: impl Into<String>, needed: u128, bound: u128) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            needed,
            bound,
            hint: None,
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
