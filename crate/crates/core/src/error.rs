use thiserror::Error;

/// Errors shared across the library. Invalid *data* (a bad triple system, a
/// broken factorization, a non-bicoloring) is reported through the report
/// types, not through this enum; these variants are for violated call
/// contracts and aborted constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order {v} is not admissible: {expected}")]
    OrderNotAdmissible { v: usize, expected: &'static str },

    #[error("a 1-factorization needs an even vertex count of at least 2, got {m}")]
    OddOrder { m: usize },

    #[error("size mismatch: expected {expected}, got {actual} ({what})")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("congruence violated: v + 1 = {m} must be divisible by 4")]
    Congruence { m: usize },

    #[error("parity violated: block of size {size} has no perfect matching")]
    Parity { size: usize },

    #[error("invalid factorization: {detail}")]
    InvalidFactorization { detail: String },

    #[error("association is not a bijection: {detail}")]
    InvalidAssociation { detail: String },

    #[error("coloring covers {actual} points but the system has {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("precondition violated: {detail}")]
    PreconditionViolated { detail: String },

    #[error("construction could not be verified: {detail}")]
    ConstructionUnverified { detail: String },

    #[error("instance too large to decide exactly: {detail}")]
    InstanceTooLarge { detail: String },

    #[error("verification failure: {detail}")]
    VerificationFailure { detail: String },

    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
