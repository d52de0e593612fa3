use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range [{start}, {end}) is invalid for length {len}")]
    Range { start: usize, end: usize, len: usize },

    #[error("rank {k} is out of range for a range of length {len}")]
    Rank { k: usize, len: usize },

    #[error("layout covers {layout} elements but the array has {array}")]
    LengthMismatch { layout: usize, array: usize },

    #[error("input is empty")]
    Empty,

    #[error("invalid layout: {0}")]
    InvalidLayout(String),
}

pub type Result<T> = std::result::Result<T, Error>;
