//! Crate-wide error type.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no irreducible modulus of degree {k} over GF({p})")]
    NoModulusFound { p: u64, k: u32 },
    #[error("field order p^k overflows the supported range")]
    OrderTooLarge { p: u64, k: u32 },
    #[error("zero input where a nonzero field element is required")]
    ZeroInput,
    #[error("element does not belong to GF({p}^{k})")]
    FieldMismatch { p: u64, k: u32 },
    #[error("value outside the character's domain")]
    DomainMismatch(#[source] Box<Error>),
    #[error("element is not in the norm-one subgroup")]
    NotInSubgroup,
    #[error("set element fell outside the norm-one subgroup")]
    NotInN,
    #[error("function is not a 2-to-1 mapping over GF({q})")]
    NotTwoToOne { q: u64 },
    #[error("function is not a 2-to-1 perfect nonlinear function over GF({q})")]
    NotTwoToOnePn { q: u64 },
    #[error("construction requires odd q >= 3, got q={q}")]
    EvenQ { q: u64 },
    #[error("the trivial character is not admissible here")]
    TrivialCharacter,
    #[error("ordering is not a valid pairing for the supplied function: {reason}")]
    InvalidPermutation { reason: String },
    #[error("exhaustive enumeration is limited to q <= {limit}, got q={q}")]
    TooLarge { q: u64, limit: u64 },
    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal {off_diag:.3e})")]
    ConvergenceFailure { sweeps: usize, off_diag: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("operator dimensions do not match")]
    DimensionMismatch,
    #[error("frame operator deviates from its closed form by {max_dev:.3e}")]
    ClosedFormMismatch { max_dev: f64 },
    #[error("structured and generic renormalizers disagree by {max_dev:.3e}")]
    DualPathMismatch { max_dev: f64 },
    #[error("case {case} bound violated by pair ({i}, {j}): measured {measured:.12e} vs bound {bound:.12e}")]
    BoundViolated {
        case: String,
        i: usize,
        j: usize,
        measured: f64,
        bound: f64,
    },
    #[error("subgroup character sum exceeds sqrt(q): |sum| = {measured:.9} > {bound:.9} at index {index}")]
    LiBoundViolated { index: u64, measured: f64, bound: f64 },
    #[error("codebook needs at least as many vectors as the dimension (n={n}, dim={dim})")]
    TooFewVectors { n: usize, dim: usize },
    #[error("vector norm deviates from 1 by {dev:.3e}")]
    NotUnitNorm { dev: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
