//! Tailbiting encoding and circular rotations.

use crate::error::{Error, Result};
use crate::trellis::Trellis;

/// State formed by the last `M` bits of `info`, with `info[L-1]` as MSB.
///
/// This is the tailbiting preset: the encoder starts (and therefore ends) here.
pub fn tailbiting_state(trellis: &Trellis, info: &[u8]) -> Result<usize> {
    let m = trellis.memory();
    if info.len() < m {
        return Err(Error::Input(format!(
            "tailbiting needs at least {m} info bits, got {}",
            info.len()
        )));
    }
    Ok(info[info.len() - m..].iter().fold(0usize, |state, &bit| {
        (state >> 1) | ((bit as usize & 1) << (m - 1))
    }))
}

/// Encodes from an explicit start state, returning the coded bits and the
/// final state.
pub fn encode_from(trellis: &Trellis, start: usize, info: &[u8]) -> (Vec<u8>, usize) {
    let n_out = trellis.n_out();
    let mut coded = Vec::with_capacity(n_out * info.len());
    let mut state = start;
    for &bit in info {
        let word = trellis.output_word(state, bit);
        coded.extend((0..n_out).map(|c| ((word >> c) & 1) as u8));
        state = trellis.next_state(state, bit);
    }
    (coded, state)
}

/// Tailbiting encoding: `n_out * L` coded bits whose trellis path starts and
/// ends in [`tailbiting_state`].
pub fn encode_tailbiting(trellis: &Trellis, info: &[u8]) -> Result<Vec<u8>> {
    let start = tailbiting_state(trellis, info)?;
    let (coded, end) = encode_from(trellis, start, info);
    debug_assert_eq!(start, end);
    Ok(coded)
}

/// States visited by the tailbiting path of `info`, positions `0..=L`.
pub fn tailbiting_path(trellis: &Trellis, info: &[u8]) -> Result<Vec<usize>> {
    let mut state = tailbiting_state(trellis, info)?;
    let mut states = Vec::with_capacity(info.len() + 1);
    states.push(state);
    for &bit in info {
        state = trellis.next_state(state, bit);
        states.push(state);
    }
    Ok(states)
}

/// Left rotation by `k` positions (`k` taken modulo the length).
pub fn rotate<T: Clone>(seq: &[T], k: usize) -> Vec<T> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut out = seq.to_vec();
    out.rotate_left(k % seq.len());
    out
}

/// Right rotation by `k` positions; inverse of [`rotate`].
pub fn rotate_right<T: Clone>(seq: &[T], k: usize) -> Vec<T> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut out = seq.to_vec();
    out.rotate_right(k % seq.len());
    out
}
