use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u64),
    #[error("extension degree m must be at least 1")]
    InvalidDegree,
    #[error("field order {q} exceeds the enumeration bound {bound}")]
    FieldTooLarge { q: u64, bound: u64 },
    #[error("element index {index} out of range for a field of order {q}")]
    IndexOutOfRange { index: u64, q: u64 },
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("coefficient must be nonzero")]
    ZeroArgument,
    #[error("gcd(m, l) must be 1, got m={m}, l={l}")]
    GcdViolation { m: u32, l: u32 },
    #[error("code constructions require m >= 3, got m={0}")]
    DegreeTooSmallForCodes(u32),
    #[error("count vector must have length p={p}, got {got}")]
    BadCountVector { p: u64, got: usize },
    #[error("cyclotomic elements live over different primes: {0} vs {1}")]
    MismatchedPrime(u64, u64),
    #[error("galois automorphism index must be a unit modulo p")]
    NonUnitAutomorphism,
    #[error("enumeration needs {needed} work units, over the cap {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("weight class materializes more than {cap} distinct blocks")]
    BlockCapExceeded { cap: u64 },
    #[error("no codewords of weight {0}")]
    EmptyWeightClass(u64),
    #[error("the quadratic coefficient must be zero for this code family")]
    QuadraticTermForbidden,
    #[error("a design needs at least one block")]
    EmptyDesign,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
