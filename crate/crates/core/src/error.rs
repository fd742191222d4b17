use thiserror::Error;

use crate::cone::fan::FanViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("cone is not proper: it contains a line")]
    NotProper,

    #[error("invalid fan: {} violation(s)", .0.len())]
    InvalidFan(Vec<FanViolation>),

    #[error("not a prime ideal of this monoid")]
    NotAPrime,

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("preimage of a face is not a face; the homomorphism is broken")]
    BrokenHom,

    #[error("invalid pointed module: {0}")]
    InvalidModule(String),

    #[error("invalid pointed morphism: {0}")]
    InvalidMorphism(String),

    #[error("homomorphism is not local; unramifiedness is only defined for local homomorphisms")]
    NotLocal,

    #[error("not a submonoid: {0}")]
    NotSubmonoid(String),

    #[error("invalid finite-index witness: {0}")]
    InvalidWitness(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("quotient is not finite")]
    InfiniteQuotient,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
