use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid qubit count {0}")]
    InvalidQubitCount(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("state is mixed (purity {0}); this quantity is defined for pure states only")]
    MixedState(f64),

    #[error("{what} limited to n <= {limit}, got n = {n}")]
    TooManyQubits { what: &'static str, n: usize, limit: usize },

    #[error("exhaustive Clifford enumeration unavailable for n = {0}; use the heuristic search")]
    ExhaustiveUnavailable(usize),

    #[error("invalid Pauli word {0:?}")]
    InvalidPauliWord(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unphysical Bloch vector (length {0})")]
    UnphysicalBloch(f64),

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
