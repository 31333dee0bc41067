use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid rational {0:?} (expected \"p\" or \"p/q\")")]
    Rational(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("json: {0}")]
    Json(String),
}

impl ParseError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError::Field { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("variable contexts differ")]
    Context,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("criterion not satisfied: {0}")]
    CriterionNotSatisfied(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("truncation too small: need N >= {needed}, got {got}")]
    TruncationTooSmall { needed: u32, got: u32 },
    #[error("conjugate variables are not allowed here")]
    ConjugatesPresent,
    #[error("loop sample {0} is zero")]
    ZeroSample(usize),
    #[error("loop too coarse: argument step at sample {index} is {angle:.4} rad (must be < pi/2)")]
    Density { index: usize, angle: f64 },
    #[error("winding sum is not close to an integer (residual {0:e})")]
    Residual(f64),
    #[error("no admissible detour after {0} halvings")]
    NoAdmissibleDetour(u32),
    #[error("cutoff subdivision needs more than {0} factors")]
    Subdivision(usize),
    #[error("sample check failed: {0}")]
    SampleCheck(String),
    #[error("cocycle: {0}")]
    Cocycle(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
