//! Common decoder output and the [`Decoder`] trait.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reliability::Anchor;

/// Output of any tailbiting decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub info_bits: Vec<u8>,
    /// Boundary state the decode was anchored on, when there was one.
    pub anchor: Option<Anchor>,
    /// Branch-cost sum of the decoded path over one block.
    pub path_metric: f64,
    /// Trellis stages processed, over all passes.
    pub update_count: usize,
    /// Whether the decoded path starts and ends in the same state.
    pub is_tailbiting: bool,
}

/// A decoder for one fixed code, taking one block of LLRs.
pub trait Decoder: Send + Sync {
    fn kind(&self) -> DecoderKind;

    fn decode(&self, llrs: &[f64]) -> Result<DecodeResult>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    Tsva,
    Ml,
    CvaFixed,
    Exhaustive,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Tsva => "tsva",
            Self::Ml => "ml",
            Self::CvaFixed => "cva",
            Self::Exhaustive => "exhaustive",
        }
    }

    /// Parses a comma-separated list such as `"tsva,ml,cva"`.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        let kinds = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Self>>>()?;
        if kinds.is_empty() {
            return Err(Error::Config("empty decoder list".into()));
        }
        Ok(kinds)
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tsva" => Ok(Self::Tsva),
            "ml" => Ok(Self::Ml),
            "cva" | "cva_fixed" => Ok(Self::CvaFixed),
            "exhaustive" => Ok(Self::Exhaustive),
            other => Err(Error::Config(format!("unknown decoder {other:?}"))),
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of info stages in `llrs`, checking the length and the tailbiting
/// minimum `L >= M`.
pub(crate) fn block_len(n_out: usize, memory: usize, llrs: &[f64]) -> Result<usize> {
    if !llrs.len().is_multiple_of(n_out) {
        return Err(Error::Input(format!(
            "{} LLRs is not a multiple of {n_out}",
            llrs.len()
        )));
    }
    let len = llrs.len() / n_out;
    if len < memory.max(1) {
        return Err(Error::Input(format!(
            "block of {len} info bits is shorter than the encoder memory {memory}"
        )));
    }
    Ok(len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decoder_names() {
        assert_eq!(
            DecoderKind::parse_list("tsva, ml,cva").unwrap(),
            vec![DecoderKind::Tsva, DecoderKind::Ml, DecoderKind::CvaFixed]
        );
        assert!(DecoderKind::parse_list("").is_err());
        assert!(DecoderKind::parse_list("tsva,bcjr").is_err());
        assert_eq!(DecoderKind::CvaFixed.to_string(), "cva");
    }
}
