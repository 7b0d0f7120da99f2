use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("polynomials over different fields (q={0} vs q={1})")]
    FieldMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("precision exhausted: requested exponent {requested}, available down to {available}")]
    PrecisionExhausted { requested: i64, available: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("continued fraction period not found within {0} steps")]
    PeriodNotFound(usize),
    #[error("no generator found for {0}: principality violation or box too small")]
    NoGenerator(String),
    #[error("identity failure: {0}")]
    IdentityFailure(String),
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
    #[error("target rejected: {0}")]
    TargetRejected(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
