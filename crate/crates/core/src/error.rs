use alloc::string::String;

/// Errors raised by the geometric pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument {value} outside branch domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("degenerate Weierstrass data: {0}")]
    DegenerateData(String),
    #[error("winding number failed: {0}")]
    Winding(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
