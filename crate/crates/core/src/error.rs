//! Error type shared by every module.

use crate::vector::GF2Vector;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// The last group of variants (`SubspaceClosureViolation`,
/// `CertificateViolation`, `DecrementUnavailable`, `IncrementUnavailable`,
/// `IterationBudgetExceeded`) can only be produced by a caller that violates a
/// documented precondition or by an implementation fault; the theory
/// guarantees they never fire on valid input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: u32, max: u32 },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("element {value} does not fit in dimension {dim}")]
    ElementOutOfRange { value: u64, dim: u32 },
    #[error("frequency must be non-zero")]
    ZeroFrequency,
    #[error("set must be non-empty")]
    EmptySet,
    #[error("brute-force work {work} exceeds the limit {limit}")]
    TooLarge { work: u128, limit: u128 },
    #[error("argument outside the function domain: {0}")]
    DomainError(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("quadruple is not coherently flat (witness {witness})")]
    PreconditionNotFlat { witness: GF2Vector },
    #[error("normalised energy is below 1/K")]
    PreconditionLowEnergy,
    #[error("intersection of the 9/10-spectra is not closed under addition")]
    SubspaceClosureViolation,
    #[error("certificate check `{0}` failed")]
    CertificateViolation(&'static str),
    #[error("no slice pair achieves the required doubling decrement")]
    DecrementUnavailable,
    #[error("no slice tuple achieves the required energy increment")]
    IncrementUnavailable,
    #[error("every admissible slice tuple contains an empty set")]
    EmptySlices,
    #[error("refinement exceeded its iteration budget of {budget}")]
    IterationBudgetExceeded { budget: u64 },
}
