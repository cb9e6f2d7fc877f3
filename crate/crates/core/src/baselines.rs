//! Reference decoders: maximum likelihood, exhaustive search and the
//! fixed-length circular Viterbi algorithm.

use crate::decode::{block_len, DecodeResult, Decoder, DecoderKind};
use crate::encoder::encode_tailbiting;
use crate::error::{Error, Result};
use crate::trellis::Trellis;
use crate::viterbi::{
    best_final_state, branch_metric, forward_pass_costs, traceback, BranchCosts, StartConstraint,
};

/// Largest block the exhaustive oracle accepts (`2^20` codewords).
pub const EXHAUSTIVE_MAX_INFO_BITS: usize = 20;

/// Maximum-likelihood tailbiting decoding: one Viterbi pass per boundary
/// state, each starting and ending in that state; the cheapest one wins
/// (lowest state on ties).
pub fn decode_ml(trellis: &Trellis, llrs: &[f64]) -> Result<DecodeResult> {
    let len = block_len(trellis.n_out(), trellis.memory(), llrs)?;
    let costs = BranchCosts::new(trellis, llrs)?;
    let mut best: Option<(f64, usize, _)> = None;
    for state in 0..trellis.num_states() {
        let record =
            forward_pass_costs(trellis, &costs, StartConstraint::FixedState(state), false)?;
        let metric = record.metric(len, state);
        if best.as_ref().is_none_or(|(m, _, _)| metric < *m) {
            best = Some((metric, state, record));
        }
    }
    let (metric, state, record) = best.expect("at least one state");
    let path = traceback(trellis, &record, state);
    debug_assert_eq!(path.states[0], state);
    Ok(DecodeResult {
        info_bits: path.bits,
        anchor: None,
        path_metric: metric,
        update_count: trellis.num_states() * len,
        is_tailbiting: true,
    })
}

/// Same decision as [`decode_ml`], usually with far fewer passes.
///
/// An open-start pass gives, for every state, the cheapest path ending there
/// from any start. That is a lower bound on the cost of the tailbiting path
/// through the same state (the clamped add/min recursion is monotone in its
/// initial metrics, also in floating point), so boundary states are tried in
/// increasing bound order and the search stops once no untried state can
/// beat or tie-win against the best so far. `update_count` counts the passes
/// actually run, open pass included.
pub fn decode_ml_pruned(trellis: &Trellis, llrs: &[f64]) -> Result<DecodeResult> {
    let len = block_len(trellis.n_out(), trellis.memory(), llrs)?;
    let costs = BranchCosts::new(trellis, llrs)?;
    let open = forward_pass_costs(trellis, &costs, StartConstraint::OpenAllZero, false)?;
    let mut order: Vec<(f64, usize)> = open
        .final_metrics()
        .iter()
        .copied()
        .enumerate()
        .map(|(s, m)| (m, s))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut passes = 1;
    let mut best: Option<(f64, usize, _)> = None;
    for (bound, state) in order {
        if let Some((m, s, _)) = &best {
            if bound > *m || (bound == *m && state > *s) {
                break;
            }
        }
        let record =
            forward_pass_costs(trellis, &costs, StartConstraint::FixedState(state), false)?;
        passes += 1;
        let metric = record.metric(len, state);
        if best
            .as_ref()
            .is_none_or(|(m, s, _)| metric < *m || (metric == *m && state < *s))
        {
            best = Some((metric, state, record));
        }
    }
    let (metric, state, record) = best.expect("at least one state");
    let path = traceback(trellis, &record, state);
    Ok(DecodeResult {
        info_bits: path.bits,
        anchor: None,
        path_metric: metric,
        update_count: passes * len,
        is_tailbiting: true,
    })
}

/// Brute force over all `2^L` info blocks, scored with the same branch
/// metric. Ties go to the lexicographically smallest block.
pub fn decode_exhaustive(trellis: &Trellis, llrs: &[f64]) -> Result<DecodeResult> {
    let n_out = trellis.n_out();
    let len = block_len(n_out, trellis.memory(), llrs)?;
    if len > EXHAUSTIVE_MAX_INFO_BITS {
        return Err(Error::TooLarge {
            info_len: len,
            limit: EXHAUSTIVE_MAX_INFO_BITS,
        });
    }
    let mut info = vec![0u8; len];
    let mut best: Option<(f64, Vec<u8>)> = None;
    for index in 0u64..(1u64 << len) {
        for (i, bit) in info.iter_mut().enumerate() {
            *bit = ((index >> (len - 1 - i)) & 1) as u8;
        }
        let coded = encode_tailbiting(trellis, &info)?;
        let metric = llrs
            .chunks_exact(n_out)
            .zip(coded.chunks_exact(n_out))
            .fold(0.0, |acc, (l, c)| acc + branch_metric(l, c));
        if best.as_ref().is_none_or(|(m, _)| metric < *m) {
            best = Some((metric, info.clone()));
        }
    }
    let (metric, info_bits) = best.expect("non-empty codebook");
    Ok(DecodeResult {
        info_bits,
        anchor: None,
        path_metric: metric,
        update_count: len << len,
        is_tailbiting: true,
    })
}

/// Circular Viterbi with a fixed length of `copies` replicas: one open-start
/// pass, traceback from the best final state, decisions read from the last
/// replica.
pub fn decode_cva_fixed(trellis: &Trellis, llrs: &[f64], copies: usize) -> Result<DecodeResult> {
    decode_cva_replica(trellis, llrs, copies, copies.saturating_sub(1))
}

/// As [`decode_cva_fixed`], reading the decisions from replica `replica`
/// (0-based) of the traced path.
pub fn decode_cva_replica(
    trellis: &Trellis,
    llrs: &[f64],
    copies: usize,
    replica: usize,
) -> Result<DecodeResult> {
    check_cva(copies, replica)?;
    let len = block_len(trellis.n_out(), trellis.memory(), llrs)?;
    let costs = BranchCosts::repeated(trellis, llrs, copies)?;
    let record = forward_pass_costs(trellis, &costs, StartConstraint::OpenAllZero, false)?;
    let final_state = best_final_state(&record);
    let path = traceback(trellis, &record, final_state);
    let (start, end) = (replica * len, (replica + 1) * len);
    Ok(DecodeResult {
        info_bits: path.bits[start..end].to_vec(),
        anchor: None,
        path_metric: record.metric(end, path.states[end])
            - record.metric(start, path.states[start]),
        update_count: record.update_count(),
        is_tailbiting: path.states[start] == path.states[end],
    })
}

fn check_cva(copies: usize, replica: usize) -> Result<()> {
    if copies < 2 {
        return Err(Error::Config(format!(
            "fixed CVA needs at least 2 copies, got {copies}"
        )));
    }
    if replica >= copies {
        return Err(Error::Config(format!(
            "CVA replica {replica} out of range for {copies} copies"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct MlDecoder {
    trellis: Trellis,
}

impl MlDecoder {
    pub fn new(trellis: Trellis) -> Self {
        Self { trellis }
    }
}

impl Decoder for MlDecoder {
    fn kind(&self) -> DecoderKind {
        DecoderKind::Ml
    }

    fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        decode_ml_pruned(&self.trellis, llrs)
    }
}

#[derive(Debug, Clone)]
pub struct ExhaustiveDecoder {
    trellis: Trellis,
}

impl ExhaustiveDecoder {
    pub fn new(trellis: Trellis) -> Self {
        Self { trellis }
    }
}

impl Decoder for ExhaustiveDecoder {
    fn kind(&self) -> DecoderKind {
        DecoderKind::Exhaustive
    }

    fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        decode_exhaustive(&self.trellis, llrs)
    }
}

#[derive(Debug, Clone)]
pub struct CvaDecoder {
    trellis: Trellis,
    copies: usize,
    replica: usize,
}

impl CvaDecoder {
    /// Reads the last replica.
    pub fn new(trellis: Trellis, copies: usize) -> Result<Self> {
        Self::with_replica(trellis, copies, copies.saturating_sub(1))
    }

    pub fn with_replica(trellis: Trellis, copies: usize, replica: usize) -> Result<Self> {
        check_cva(copies, replica)?;
        Ok(Self {
            trellis,
            copies,
            replica,
        })
    }
}

impl Decoder for CvaDecoder {
    fn kind(&self) -> DecoderKind {
        DecoderKind::CvaFixed
    }

    fn decode(&self, llrs: &[f64]) -> Result<DecodeResult> {
        decode_cva_replica(&self.trellis, llrs, self.copies, self.replica)
    }
}
