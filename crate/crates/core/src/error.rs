use thiserror::Error;

/// Errors raised by the simulator, the optimizers and the file loader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("expectation value has imaginary part {imag:e}; the Hamiltonian is not Hermitian")]
    ImaginaryExpectation { imag: f64 },

    #[error("non-finite coefficient {0}")]
    NonFiniteCoefficient(f64),

    #[error("invalid Pauli string: {0}")]
    InvalidPauliString(String),

    #[error("invalid qubit indices {indices:?}: {reason}")]
    InvalidIndices { indices: Vec<usize>, reason: String },

    #[error("{n_electrons} electrons do not fit in {n_qubits} qubits")]
    TooManyElectrons { n_electrons: usize, n_qubits: usize },

    #[error("string exponential requires a unit coefficient, found {0}")]
    NonUnitCoefficient(f64),

    #[error("unknown {what} '{name}'")]
    UnknownName { what: &'static str, name: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("excitation pool is empty")]
    EmptyPool,

    #[error("{n_qubits} qubits is beyond the supported limit of {limit}")]
    TooManyQubits { n_qubits: usize, limit: usize },

    #[error("eigensolver did not converge (residual norm {residual:e})")]
    EigenNotConverged { residual: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
