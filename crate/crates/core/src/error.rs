use thiserror::Error;

/// Errors produced by field construction, character evaluation and the sum paths.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {q} exceeds the table cap of 2^20")]
    FieldTooLarge { q: u64 },

    #[error("invalid extension degree {0}")]
    BadDegree(u32),

    #[error("supplied modulus is not monic of degree {expected}")]
    BadModulus { expected: u32 },

    #[error("supplied modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },

    #[error("no irreducible polynomial found (degree {0})")]
    NoIrreducible(u32),

    #[error("element code {code} out of range for field of size {q}")]
    BadElement { code: u64, q: u64 },

    #[error("inversion of zero")]
    ZeroInversion,

    #[error("characters live over different fields")]
    MismatchedFields,

    #[error("character index {j} out of range for group of order {order}")]
    BadCharIndex { j: u64, order: u64 },

    #[error("operation requires a non-trivial character")]
    TrivialCharacter,

    #[error("Jacobi decomposition is undefined when both characters are trivial")]
    BothTrivial,

    #[error("argument t must be nonzero")]
    ZeroArgument,

    #[error("hypergeometric tuples are both empty")]
    EmptyTuples,

    #[error("quadratic extension requires odd field size")]
    EvenField,

    #[error("witness prime search exhausted below 2^31 for L = {0}")]
    WitnessSearchExhausted(u64),

    #[error("witness prime has modulus L = {got}, expected {expected}")]
    WitnessModulusMismatch { got: u64, expected: u64 },

    #[error("table file is corrupt: {0}")]
    CorruptTable(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
