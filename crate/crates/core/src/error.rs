use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QamError {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid domain for {family}: {reason}")]
    InvalidDomain { family: String, reason: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("not a generator: {0}")]
    NotAGenerator(String),

    #[error("value {value} lies outside the domain {domain}")]
    OutsideDomain { value: f64, domain: String },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("non-finite value {value} at {at}")]
    Numeric { value: f64, at: String },
}

pub type Result<T> = std::result::Result<T, QamError>;
