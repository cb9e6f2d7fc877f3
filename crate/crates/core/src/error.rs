use std::io;

use thiserror::Error;

/// Errors produced by code construction, decoding and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid code, channel or simulation parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// Input data with the wrong shape for the operation.
    #[error("input error: {0}")]
    Input(String),
    /// The exhaustive oracle refuses blocks whose codebook is too large.
    #[error("block of {info_len} info bits is too large for exhaustive search (limit {limit})")]
    TooLarge { info_len: usize, limit: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
