use thiserror::Error;

/// Errors shared across the whole engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {value} is divisible by {prime}")]
    NotAUnit { prime: u64, value: i64 },
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("precision too low: need {needed} digits at p={prime}, have {have}")]
    PrecisionTooLow { prime: u64, needed: u32, have: u32 },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("group is not a {0}-group")]
    NotAPGroup(u64),
    #[error("order cap exceeded: {order} > {cap}")]
    OrderCapExceeded { order: u128, cap: u64 },
    #[error("group is not periodic")]
    NonPeriodic,
    #[error("group is infinite")]
    InfiniteGroup,
    #[error("base group is not materialized to a finite group")]
    InfiniteBase,
    #[error("automorphism is incompatible with the base group")]
    IncompatibleBase,
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid spec: {0}")]
    SpecInvalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
