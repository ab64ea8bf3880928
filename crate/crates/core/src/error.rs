use num_bigint::BigInt;
use thiserror::Error;

/// Errors reported by the library. Absence of a solution is never an error;
/// those cases are returned as `None` or as an explicit verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate lattice: 4ac - b^2 = 0 for (a, b, c) = ({a}, {b}, {c})")]
    DegenerateLattice { a: BigInt, b: BigInt, c: BigInt },

    #[error("lattice does not have signature (1,1)")]
    NotHyperbolic,

    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,

    #[error("({u}, {v}) does not solve u^2 - {d} v^2 = {expected}")]
    NotAPellSolution {
        u: BigInt,
        v: BigInt,
        d: BigInt,
        expected: i32,
    },

    #[error("parity violation: {0} is odd where an even value was required")]
    Parity(BigInt),

    #[error("u^2 - {d} v^2 = {sign} has no solution")]
    NoFundamentalSolution { d: BigInt, sign: i32 },

    #[error("search cap of {cap} exceeded before a result was found")]
    CapExceeded { cap: u64 },

    #[error("not in correspondence: {0}")]
    NotInCorrespondence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
