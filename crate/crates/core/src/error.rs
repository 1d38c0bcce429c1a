use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("eigenvalue tables failed the duality check: {0}")]
    Duality(String),
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("linear program is {0}")]
    LpStatus(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("vacuous bound: denominator {0} is not positive")]
    VacuousBound(String),
    #[error("missing table entry {0} (strict mode)")]
    MissingTableEntry(String),
    #[error("line {line}: {msg}")]
    TableFile { line: usize, msg: String },
    #[error("code file line {line}: {msg}")]
    CodeFile { line: usize, msg: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
}
