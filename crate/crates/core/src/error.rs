use alloc::string::String;

use crate::transcript::PartyId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected {expected} amplitudes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("the zero vector cannot be normalized")]
    ZeroVector,
    #[error("register must hold at least one qubit")]
    EmptyRegister,
    #[error("{requested} qubits exceeds the limit of {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("qubit {qubit} is outside 1..={n_qubits}")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("gate acts on {expected} qubits but {found} targets were given")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coefficients are not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
    #[error("basis vectors are not orthonormal")]
    NonOrthonormalBasis,
    #[error("basis has {found} vectors, a complete basis on {m_qubits} qubits needs {expected}")]
    IncompleteBasis {
        m_qubits: usize,
        expected: usize,
        found: usize,
    },
    #[error("outcome k={k} has zero probability")]
    ZeroProbabilityOutcome { k: usize },
    #[error("outcome k={k} is outside 1..={count}")]
    OutcomeOutOfRange { k: usize, count: usize },
    #[error("bipartition must split the register into two nonempty parts")]
    DegeneratePartition,
    #[error("expected a {expected}-qubit state, found {found}")]
    WrongQubitCount { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{party} may not act on qubit {qubit}")]
    LocalityViolation { party: PartyId, qubit: usize },
    #[error("protocol step out of order: {0}")]
    OutOfOrder(&'static str),
    #[error("classical bit {bit} is read before it is written")]
    UnwrittenClassicalBit { bit: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
