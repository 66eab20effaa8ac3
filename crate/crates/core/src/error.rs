use thiserror::Error;

use crate::position::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NonMonotoneInput: sequence {0:?} is not non-decreasing")]
    NonMonotoneInput(Vec<u64>),

    #[error("BoundsExceeded: {0}")]
    BoundsExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("LoopyFamily: {0} allows add-moves and has no well-founded recursion")]
    LoopyFamily(Family),

    #[error("TooWide: closed form covers at most 2 columns, got {0}")]
    TooWide(usize),

    #[error("InsufficientProbe: probe length {probe} is below the required {required}")]
    InsufficientProbe { probe: usize, required: usize },

    #[error("invalid lattice direction: {0}")]
    InvalidDirection(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
