use thiserror::Error;

/// Errors raised by the group and scheme machinery.
///
/// The variants line up with the CLI exit-code contract: input and
/// precondition problems are semantic (exit 2), schema problems come from
/// malformed files (exit 3) and resource problems from enumeration bounds
/// (exit 4).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undeclared generator `{symbol}` in {context}")]
    UndeclaredGenerator { symbol: String, context: String },

    #[error("invalid homomorphism {name}: {reason}")]
    InvalidHomo { name: String, reason: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("{what}: estimated {estimate} exceeds limit {limit}")]
    Resource {
        what: String,
        estimate: u128,
        limit: u128,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
