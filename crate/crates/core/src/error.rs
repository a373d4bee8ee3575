use thiserror::Error;

/// Errors raised while building or validating instances and models.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown species {0}")]
    UnknownSpecies(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("instance too large for enumeration: {nodes} nodes (cap {cap})")]
    TooLarge { nodes: usize, cap: usize },
    #[error("no feasible solution: {0}")]
    Infeasible(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Milp(#[from] crate::milp::MilpError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
