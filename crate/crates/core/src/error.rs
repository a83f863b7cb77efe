use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation of 1..={n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("degree {0} is outside the supported range 1..=255")]
    UnsupportedDegree(usize),

    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("cannot parse cycle notation: {0}")]
    Parse(String),

    #[error("rank {rank} is outside 0..{n}!")]
    RankOutOfRange { rank: u64, n: usize },

    #[error("n = {n} exceeds the cap of {cap} for this operation")]
    CapExceeded { n: usize, cap: usize },

    #[error("parameters outside hypotheses: {0}")]
    OutOfHypotheses(String),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("characteristic 2 is not supported: -x = x makes every half-set degenerate")]
    CharacteristicTwo,

    #[error("field order {0} is too large (at most 255 points)")]
    FieldTooLarge(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("attempt to invert zero")]
    DivisionByZero,

    #[error("invalid half-set: {0}")]
    InvalidHalfSet(String),

    #[error("invalid field element label {label} for order {order}")]
    InvalidElement { label: u32, order: u32 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
