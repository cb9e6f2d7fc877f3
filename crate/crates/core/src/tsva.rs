//! The two-step decoder.
//!
//! Step one runs an open-start Viterbi pass (over `copies` concatenated
//! replicas of the block) recording survivor metric differences, traces back
//! the best survivor and picks the most reliable position on it as the
//! anchor. Step two rotates the block so the anchor position comes first and
//! runs a Viterbi pass constrained to start and end in the anchor state.
//!
//! The work per block is `(copies + 1) * L` trellis stages regardless of the
//! channel.

use crate::decode::{block_len, DecodeResult, Decoder, DecoderKind};
use crate::encoder::{rotate, rotate_right};
use crate::error::{Error, Result};
use crate::reliability::{Anchor, StateReliability};
use crate::trellis::Trellis;
use crate::viterbi::{forward_pass, traceback, StartConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsvaConfig {
    /// Moving-average window over the state likelihoods.
    pub window: usize,
    /// Replicas of the block concatenated for the reliability pass.
    pub copies: usize,
}

impl TsvaConfig {
    pub fn new(window: usize, copies: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        if copies == 0 {
            return Err(Error::Config("copies must be at least 1".into()));
        }
        Ok(Self { window, copies })
    }
}

impl Default for TsvaConfig {
    fn default() -> Self {
        Self {
            window: 8,
            copies: 1,
        }
    }
}

pub fn decode_tsva(trellis: &Trellis, llrs: &[f64], cfg: &TsvaConfig) -> Result<DecodeResult> {
    block_len(trellis.n_out(), trellis.memory(), llrs)?;
    let reliability = StateReliability::estimate(trellis, llrs, cfg.copies)?;
    let anchor = reliability.anchor(cfg.window)?;
    let mut result = decode_anchored(trellis, llrs, anchor.position, anchor.state)?;
    result.anchor = Some(anchor);
    result.update_count += reliability.update_count();
    Ok(result)
}

/// Step two alone: Viterbi decoding forced to start and end in `state` at
/// trellis position `position`.
pub fn decode_anchored(
    trellis: &Trellis,
    llrs: &[f64],
    position: usize,
    state: usize,
) -> Result<DecodeResult> {
    let len = block_len(trellis.n_out(), trellis.memory(), llrs)?;
    if position >= len {
        return Err(Error::Input(format!(
            "anchor position {position} outside block of {len}"
        )));
    }
    let rotated = rotate(llrs, trellis.n_out() * position);
    let record = forward_pass(trellis, &rotated, StartConstraint::FixedState(state), false)?;
    let path = traceback(trellis, &record, state);
    debug_assert_eq!(path.states[0], state);
    Ok(DecodeResult {
        info_bits: rotate_right(&path.bits, position),
        anchor: Some(Anchor {
            position,
            state,
            replica: 0,
        }),
        path_metric: record.metric(len, state),
        update_count: record.update_count(),
        is_tailbiting: path.is_tailbiting(),
    })
}

#[derive(Debug, Clone)]
pub struct TsvaDecoder {
    trellis: Trellis,
    config: TsvaConfig,
}

impl TsvaDecoder {
    pub fn new(trellis: Trellis, config: TsvaConfig) -> Self {
        Self { trellis, config }
    }

    pub fn config(&self) -> &TsvaConfig {
        &self.config
    }
}

impl Decoder for TsvaDecoder {
    fn kind(&self) -> DecoderKind {
        DecoderKind::Tsva
    }

    fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        decode_tsva(&self.trellis, llrs, &self.config)
    }
}
