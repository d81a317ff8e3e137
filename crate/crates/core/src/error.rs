use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {degree} over GF({p})")]
    ReducibleModulus { p: u32, degree: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field of order {p}^{k} exceeds the supported bound 2^16")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("operation requires an infinite field")]
    FiniteField,
    #[error("scalar {0} is not valid for this field")]
    InvalidScalar(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch")]
    FieldMismatch,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("line {line}, column {column}: {message}")]
    File {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("factor {factor} is not homogeneous (constant term)")]
    NonHomogeneous { factor: usize },
    #[error("factor {factor} vanishes identically over this field")]
    ZeroFactor { factor: usize },
    #[error("hyperplane {index} duplicates hyperplane {previous}")]
    DuplicateHyperplane { index: usize, previous: usize },
    #[error("the zero covector does not define a hyperplane")]
    ZeroCovector,
    #[error("scale guard exceeded: {what} is {value}, limit {limit} (set MATFREE_GUARD_OVERRIDE=1 to lift)")]
    GuardExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("hard limit exceeded: {what} is {value}, limit {limit}")]
    HardLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("index {index} out of range for an arrangement of {len} hyperplanes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not a permutation of the hyperplane indices")]
    NotAPermutation,
    #[error("added hyperplanes must be new: {0}")]
    NotDisjoint(String),
    #[error("restriction to the zero subspace")]
    ZeroRestriction,
    #[error("block of size {size} exceeds dimension {dim}")]
    BlockTooLarge { size: usize, dim: usize },
    #[error("cover method {method} cannot be used over this field")]
    MethodFieldMismatch { method: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
