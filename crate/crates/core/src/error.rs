use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit layout must not be empty")]
    EmptyLayout,

    #[error("operand {qubit} out of range for a {width}-qubit circuit")]
    OperandOutOfRange { qubit: usize, width: usize },

    #[error("duplicate operand {qubit}")]
    DuplicateOperand { qubit: usize },

    #[error("{kind} expects {expected} operands, got {got}")]
    OperandCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gate {index} is an unexpanded multi-controlled X")]
    UnexpandedMcx { index: usize },

    #[error("gate {index} ({kind}) is not allowed in the {basis} basis input")]
    UnsupportedGate {
        index: usize,
        kind: &'static str,
        basis: &'static str,
    },

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("no compute/uncompute mirror structure found: {0}")]
    NoMirrorStructure(String),

    #[error("circuit width {width} exceeds the simulation budget of {max} qubits")]
    WidthOverBudget { width: usize, max: usize },

    #[error("state dimension {got} does not match 2^{width}")]
    DimensionMismatch { width: usize, got: usize },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
