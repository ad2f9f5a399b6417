use num_bigint::BigInt;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(BigInt, BigInt),
    #[error("unfactored cofactor {cofactor} exceeds the {max_bits}-bit factorization budget")]
    FactorizationBudgetExceeded { cofactor: BigInt, max_bits: u64 },
    #[error("divisor count {count} exceeds the budget of {max}")]
    DivisorBudgetExceeded { count: BigInt, max: u64 },
    #[error("p and q must both be nonzero")]
    ZeroParameter,
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    #[error("cyclotomic orders {0} and {1} do not match")]
    OrderMismatch(u64, u64),
    #[error("order {0} does not divide order {1}")]
    IncompatibleOrders(u64, u64),
    #[error("matrix dimensions are incompatible: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid representation data: {0}")]
    InvalidSpec(String),
    #[error("canonical structure violated: {0}")]
    StructureViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("specs are incompatible: {0}")]
    IncompatibleSpecs(String),
    #[error("constructed invariant subspace failed exact verification")]
    WitnessVerificationFailed,
    #[error("ell = {0} exceeds the enumeration budget of {1}")]
    EllBudgetExceeded(BigInt, u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
