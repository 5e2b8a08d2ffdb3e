use thiserror::Error;

/// Errors produced by the arithmetic kernel, the tower constructors, and the
/// certificate pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),

    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("element belongs to field {got:?}, expected field {expected:?}")]
    WrongField { expected: usize, got: usize },

    #[error("unknown field id {0}")]
    UnknownField(usize),

    #[error("unsupported adjunction target: {0}")]
    UnsupportedAdjunction(String),

    #[error("candidate generators are not a p-basis: jacobian rank {rank} < {expected}")]
    NotPBasis { rank: usize, expected: usize },

    #[error("no triangular rewriting of old generators: stuck at {0}")]
    NoRewriting(String),

    #[error("not a p^{exponent}-th power: {what}")]
    NotAPower { exponent: u32, what: String },

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("integer overflow in {0}")]
    Overflow(String),

    #[error("admissible-parameter search exhausted after {0} candidates")]
    SearchExhausted(usize),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
