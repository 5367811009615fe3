//! Exact computations around the algebraic K-theory of the cuspidal curves
//! `k[x, y]/(x^b - y^a)`: semigroup combinatorics, cyclic simplicial
//! complexes with their integral homology and rotation action, the small
//! Hochschild-type complex used as an oracle, K-group orders, and
//! representation-theoretic bookkeeping for cyclic groups.

pub mod arith;
pub mod dense;
pub mod equivariant;
pub mod hochschild;
pub mod homology;
pub mod ktheory;
mod reduce;
pub mod picard;
pub mod simplicial;
pub mod sparse;

pub use arith::{SemigroupPair, TruncationSet};
pub use dense::IntMatrix;
pub use homology::{GradedHomology, HomologyOptions};

pub use sparse::SparseIntMatrix;

/// Version string mixed into cache keys; bump when any computed output changes.
pub const ALGORITHM_VERSION: &str = "cuspidal-1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid semigroup pair ({a}, {b}): need a, b >= 2 and gcd(a, b) = 1")]
    InvalidPair { a: u64, b: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{d} does not divide {m}")]
    NotDivisor { d: u64, m: u64 },
    #[error("cardinality mismatch for {what}: expected {expected}, found {found}")]
    CardinalityMismatch {
        what: &'static str,
        expected: u64,
        found: u64,
    },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("input outside the supported regime: {0}")]
    OutOfRegime(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
