use thiserror::Error;

/// Errors raised by the solvers, constructions and parsers.
///
/// The variants are grouped the way the command line reports them: parse
/// failures, violated preconditions or resource guards, and broken internal
/// invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parity obstruction: {0}")]
    ParityObstruction(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors that stem from the input rather than from a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
