use thiserror::Error;

/// Every failure mode of the toolkit.
///
/// Precondition failures and precision failures are kept apart so callers
/// (and the CLI exit codes) can tell "the claim is false" from "the claim
/// could not be decided".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("level cap exceeded: level {level} > cap {cap}")]
    LevelCapExceeded { level: u64, cap: u32 },
    #[error("denominator {0} exceeds the configured cap")]
    DenominatorCapExceeded(String),
    #[error("Hensel condition failed: {0}")]
    HenselConditionFailed(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("root check failed: f(alpha) = {0} is distinguishable from zero")]
    RootCheckFailed(String),
    #[error("balls do not form an antitone chain at index {0}")]
    NotAChain(usize),
    #[error("subspace is the full ambient space")]
    SubspaceIsFull,
    #[error("map values are inconsistent with linearity: {0}")]
    InconsistentMap(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("operator is not isometric: {0}")]
    NotIsometric(String),
    #[error("invalid radii: {0}")]
    RadiiInvalid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precision_loss(what: impl Into<String>) -> Error {
    Error::PrecisionLoss(what.into())
}
