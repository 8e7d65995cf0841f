use thiserror::Error;

/// Errors raised by the simulator.
///
/// `Domain` covers arguments outside an operation's mathematical domain
/// (bad partitions, patterns from the wrong basis, disallowed K-values).
/// `Resource` covers requests that are well-posed but too large to hold in
/// memory as dense vectors or operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
