use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operand sizes differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("{0} qubits exceeds the supported maximum of {1}")]
    TooManyQubits(usize, usize),
    #[error("observable is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("observable does not square to the identity")]
    NotInvolutory,
    #[error("zero-probability branch (p = {0:e})")]
    ZeroProbability(f64),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("state is outside the code space: {0}")]
    OutsideCodespace(String),
    #[error("no Pauli correction reaches the ideal gate for outcomes {0:?}")]
    NotPauliClosed(Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("sample count must be positive")]
    NoShots,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Parse { what, detail: detail.into() }
}
