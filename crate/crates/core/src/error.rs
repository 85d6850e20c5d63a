use thiserror::Error;

use crate::circuit::QubitId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {count}-qubit register")]
    QubitOutOfRange { qubit: QubitId, count: usize },

    #[error("qubit {0} appears more than once in one gate")]
    DuplicateQubit(QubitId),

    #[error("malformed gate: {0}")]
    InvalidGate(String),

    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} qubits exceeds the dense simulation cap of {cap}", cap = crate::sim::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("gate `{0}` is not a permutation gate; compare unitaries instead")]
    NotPermutation(String),

    #[error("{variant} shift: m >= {min} required, got m = {m}")]
    PositionQubits { variant: &'static str, m: usize, min: usize },

    #[error("working register n = {n} outside formula domain (n >= {min})")]
    FormulaDomain { n: usize, min: usize },

    #[error("lowering needs {needed} decomposition ancillas, layout provides {available}")]
    InsufficientAncillas { needed: usize, available: usize },

    #[error("gate acts on decomposition ancilla {0}, which lowering reserves")]
    AncillaInUse(QubitId),

    #[error("unknown pipeline stage `{0}`")]
    UnknownStage(String),

    #[error("pipeline config: {0}")]
    Config(String),

    #[error("cancellation did not reach a fixpoint within {0} rounds")]
    CancellationCap(usize),

    #[error("cannot export gate: {0}")]
    Unsupported(String),

    #[error("circuit text line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
