use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs outside an operation's domain (bad index, inconsistent weights, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested size is above the configured guard for this computation.
    #[error("capacity exceeded: {what} supports n <= {max}, got {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        max: usize,
    },
    /// Malformed or inconsistent structured data (shape mismatches, invalid representations).
    #[error("structural error: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}
