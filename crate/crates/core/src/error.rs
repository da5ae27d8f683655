use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli letter {0:?}")]
    InvalidPauliLetter(char),

    #[error("Pauli index {index} out of range for {n} qubits")]
    PauliIndexOutOfRange { index: u64, n: usize },

    #[error("{what} supports at most {max} qubits, got {n}")]
    TooManyQubits { what: &'static str, n: usize, max: usize },

    #[error("qubit count must be at least 1")]
    NoQubits,

    #[error("damping parameter {0} outside the admissible range")]
    GammaOutOfRange(f64),

    #[error("code has no codewords")]
    EmptyCode,

    #[error("codeword {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },

    #[error("codeword {index} is not normalized (norm {norm:.3e})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("codewords {first} and {second} are not orthogonal (|<a|b>| = {overlap:.3e})")]
    NotOrthogonal { first: usize, second: usize, overlap: f64 },

    #[error("unknown built-in code {0:?}")]
    UnknownCode(String),

    #[error("invalid feasibility query: {0}")]
    InvalidQuery(String),

    #[error("no bracket: the program is feasible at c = {c_lo}")]
    NoBracket { c_lo: f64 },

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("malformed MPS input at line {line}: {message}")]
    Mps { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
