//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("invalid multijection: {0}")]
    InvalidMultijection(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{elem} is not invertible in {ring}")]
    NotInvertible { ring: String, elem: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("ill-defined lift: {0}")]
    IllDefinedLift(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
