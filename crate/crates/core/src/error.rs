use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("order {order} exceeds the configured cap of {cap}")]
    OrderLimitExceeded { order: usize, cap: usize },

    #[error("subgroup of order {order} is not normal in its ambient group of order {ambient}")]
    NotNormal { order: usize, ambient: usize },

    #[error("invalid Goursat quintuple: {0}")]
    InvalidQuintuple(String),

    #[error("factor mismatch: {0}")]
    FactorMismatch(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not a subdirect product: |p1(U)| = {p1} of |G| = {g}, |p2(U)| = {p2} of |H| = {h}")]
    NotSubdirect { p1: usize, g: usize, p2: usize, h: usize },

    #[error("subgroup contains no twisted diagonal")]
    NoDiagonal,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two routes that must agree by theorem disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
