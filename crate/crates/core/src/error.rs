use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("prime {0} divides a denominator of the matrix")]
    BadPrime(u64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("rational reconstruction failed: not enough moduli")]
    InsufficientModuli,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("polynomial {index} is not homogeneous of degree {degree}")]
    NotHomogeneous { index: usize, degree: u32 },
    #[error("system is not square: {polys} polynomials in {vars} variables")]
    NotSquare { polys: usize, vars: usize },
    #[error("Macaulay minor is singular at this point")]
    DegenerateMinor,
    #[error("{what} {value} exceeds the configured cap {cap}")]
    DegreeCapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("too many degenerate evaluation points ({degenerate} of {attempted}) after all variable transforms")]
    TooManyDegeneratePoints { attempted: usize, degenerate: usize },
    #[error("eigenvector must be nonzero")]
    ZeroVector,
    #[error("vertex set has size {actual}, expected {expected}")]
    BadSetSize { expected: usize, actual: usize },
    #[error("{what} {value} exceeds the enumeration cap {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("|V1| = {0} must be even and at least 2")]
    OddV1(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("condition (a) violated: edge {edge:?} has {count} vertices in V1")]
    ConditionAViolated { edge: Vec<usize>, count: usize },
    #[error("condition (b) violated: {subset:?} has {count} neighbors in V1 (|V1| = {v1})")]
    ConditionBViolated { subset: Vec<usize>, count: usize, v1: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
