use thiserror::Error;

use crate::gaussian::GaussianInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operation undefined for zero input")]
    ZeroInput,

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("cannot parse Gaussian integer literal {0:?}")]
    Parse(String),

    #[error("norm {norm} exceeds the trial-division budget {budget}")]
    FactorBudget { norm: String, budget: u64 },

    #[error("{0} is not a Gaussian prime")]
    NotPrime(GaussianInt),

    #[error("unsupported coefficient epsilon = {0}")]
    UnsupportedEps(GaussianInt),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("identity violated: {0}")]
    Identity(String),

    #[error("{0} is not divisible by {1}")]
    NotDivisible(GaussianInt, GaussianInt),

    #[error("{0} is not a square in Z[i]")]
    NotSquare(GaussianInt),

    #[error("unknown case tag {0:?}")]
    UnknownCase(String),

    #[error("unknown verification tag {0:?}")]
    UnknownTheorem(String),

    #[error("unknown equation {0:?}")]
    UnknownEquation(String),

    /// Equation is not one of the resolvent-bearing catalog entries.
    #[error("equation {0} has no resolvent in the catalog")]
    NoResolvent(String),

    #[error("bound {bound} exceeds budget {budget}")]
    Budget { bound: u32, budget: u32 },

    #[error("arithmetic overflow in fixed-width kernel")]
    Overflow,

    /// A step the descent argument claims is always possible failed.
    /// Carries the operands so the witness can be inspected.
    #[error("contradiction witness: {reason}; operands: {operands}")]
    ContradictionWitness { reason: String, operands: String },

    #[error("malformed certificate line {line}: {reason}")]
    Certificate { line: usize, reason: String },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
