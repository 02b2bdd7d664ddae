use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus {0} outside [2, 2^62]")]
    InvalidModulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("{value} is not invertible mod {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("evaluation point {0} is repeated")]
    DuplicatePoint(u64),
    #[error("evaluation point is zero")]
    ZeroPoint,
    #[error("points and weights differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// A violated parameter inequality, named in the message.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parameter violation: {0}")]
pub struct ParamError(pub String);

impl ParamError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        ParamError(msg.into())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfheError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("index {index} outside [1, {n}]")]
    IndexOutOfRange { index: u64, n: u64 },
    #[error("noise bound {bound} exceeds decoding budget {budget}")]
    NoiseBudget { bound: u128, budget: u128 },
    #[error("ciphertext carries no noise tag; linear decoding needs test-mode ciphertexts")]
    Untagged,
    #[error("operation requires a test-mode digest")]
    NotTestMode,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("index {index} outside [1, {n}]")]
    IndexOutOfRange { index: u64, n: u64 },
    #[error("vector length {got} does not match n = {n}")]
    LengthMismatch { got: usize, n: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Pfhe(#[from] PfheError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}

impl From<ArithError> for StreamError {
    fn from(e: ArithError) -> Self {
        StreamError::Pfhe(PfheError::Arith(e))
    }
}
