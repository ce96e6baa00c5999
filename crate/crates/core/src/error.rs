//! Error types shared across the crate.

use thiserror::Error;

/// Position-carrying syntax error for model, manifest, predicate and
/// QDIMACS input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

/// Semantic error in a machine, predicate or configuration.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("duplicate domain value `{value}` for variable `{var}`")]
    DuplicateDomainValue { var: String, value: String },
    #[error("value `{value}` is not in the domain of `{var}`")]
    ValueNotInDomain { var: String, value: String },
    #[error("variables `{0}` and `{1}` have different domains and cannot be compared")]
    DomainMismatch(String, String),
    #[error("configuration is not total: missing `{0}`")]
    PartialConfiguration(String),
    #[error("configuration does not satisfy the global predicate of `{0}`")]
    InvalidConfiguration(String),
    #[error("machine `{machine}`: {message}")]
    InvalidMachine { machine: String, message: String },
    #[error("variable scopes overlap on `{0}`")]
    VariableClash(String),
    #[error("inconsistent combined predicate: {0}")]
    InconsistentPredicate(String),
}

/// An enumeration or refinement limit was exceeded; the symbolic path
/// must be used instead.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("capacity exceeded while {what}: needs {required}, budget is {budget}")]
pub struct CapacityError {
    pub what: String,
    pub required: u128,
    pub budget: u128,
}

impl CapacityError {
    pub fn new(what: impl Into<String>, required: u128, budget: u128) -> Self {
        CapacityError { what: what.into(), required, budget }
    }
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<ParseError> for Error {
    fn from(source: ParseError) -> Self {
        Error::Parse { path: "<input>".into(), source }
    }
}

impl Error {
    pub fn parse_in(path: impl Into<String>, source: ParseError) -> Self {
        Error::Parse { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
