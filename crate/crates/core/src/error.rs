use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero (degenerate coefficient)")]
    DivisionByZero,
    #[error("specialization pole: {0}")]
    SpecializationPole(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("convention mismatch: {0}")]
    Convention(String),
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid delta: {0}")]
    InvalidDelta(String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("not a TL modulus: {0}")]
    NotTlModulus(String),
    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, column, msg: msg.into() }
    }

    /// Shift a single-line parse error onto a line of a larger input.
    pub fn at_line(self, line: usize, column_offset: usize) -> Self {
        match self {
            Error::Parse { column, msg, .. } => Error::Parse { line, column: column + column_offset, msg },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
