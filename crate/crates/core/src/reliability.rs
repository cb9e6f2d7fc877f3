//! Reliability of the states along a survivor path, and anchor selection.
//!
//! After an open-start forward pass with delta recording, the minimum-metric
//! survivor is traced back. Every merge `(j, sigma_j)` on that path discarded
//! one competitor. The competitor is followed back through the survivor
//! pointers until it rejoins the path at some position `d`; every position
//! strictly between `d` and `j` was avoided by the competitor, so its
//! likelihood is bounded above by the merge's delta. The likelihood `L_i` of
//! position `i` is the smallest such bound.
//!
//! A forward moving sum over `L` smooths isolated estimation errors, and
//! the position with the largest smoothed value gives the anchor state.

use crate::error::{Error, Result};
use crate::trellis::Trellis;
use crate::viterbi::{
    best_final_state, forward_pass_costs, traceback, BranchCosts, ForwardRecord, StartConstraint,
    SurvivorPath,
};

/// Per-position likelihoods `L_0..=L_T` of `path` (states at positions `0..=T`).
///
/// Positions that no competitor ever excluded take the largest finite value
/// found in the block (zero if there is none).
pub fn compute_state_likelihoods(record: &ForwardRecord, path: &[usize]) -> Result<Vec<f64>> {
    let stages = record.stages();
    if !record.has_deltas() {
        return Err(Error::Input("forward record has no deltas".into()));
    }
    if path.len() != stages + 1 {
        return Err(Error::Input(format!(
            "path has {} states, record has {stages} stages",
            path.len()
        )));
    }
    let mut likelihoods = vec![f64::INFINITY; stages + 1];
    for j in 1..=stages {
        let merge_state = path[j];
        let delta = record.delta(j, merge_state).unwrap_or(0.0);
        // walk the competitor back until it rejoins the path at `rejoin`
        let mut competitor = record.discarded_predecessor(j, merge_state);
        let mut t = j - 1;
        let rejoin = loop {
            if competitor == path[t] {
                break Some(t);
            }
            if t == 0 {
                break None;
            }
            competitor = record.survivor_predecessor(t, competitor);
            t -= 1;
        };
        let first = rejoin.map_or(0, |d| d + 1);
        for l in &mut likelihoods[first..j] {
            if delta < *l {
                *l = delta;
            }
        }
    }
    saturate(&mut likelihoods);
    Ok(likelihoods)
}

fn saturate(likelihoods: &mut [f64]) {
    let cap = likelihoods
        .iter()
        .copied()
        .filter(|l| l.is_finite())
        .fold(None, |acc: Option<f64>, l| {
            Some(acc.map_or(l, |a| a.max(l)))
        })
        .unwrap_or(0.0);
    for l in likelihoods.iter_mut().filter(|l| !l.is_finite()) {
        *l = cap;
    }
}

/// Forward moving sum `Lhat_i = L_i + ... + L_{i+window-1}`, with terms past
/// the end of the path taken as zero.
/// Positions within `window - 1` of the end get truncated sums; their own
/// likelihoods are bounded by few later merges and run high.
pub fn windowed_likelihood(likelihoods: &[f64], window: usize) -> Result<Vec<f64>> {
    let len = likelihoods.len();
    if window == 0 || window > len {
        return Err(Error::Config(format!(
            "window {window} outside 1..={len} for a path of {len} positions"
        )));
    }
    Ok((0..len)
        .map(|i| likelihoods[i..(i + window).min(len)].iter().sum::<f64>())
        .collect())
}

/// Chosen anchor for the constrained second pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchor {
    /// Position within one block, `0..period`.
    pub position: usize,
    pub state: usize,
    /// Which concatenated replica the maximum fell in.
    pub replica: usize,
}

/// Argmax of `windowed` (lowest index on ties), reduced modulo `period`.
pub fn select_anchor(windowed: &[f64], path: &[usize], period: usize) -> Anchor {
    debug_assert_eq!(windowed.len(), path.len());
    let raw = windowed
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
        .0;
    Anchor {
        position: raw % period,
        state: path[raw],
        replica: raw / period,
    }
}

/// Likelihoods, smoothed likelihoods and the anchor for one window size.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityPath {
    pub states: Vec<usize>,
    pub likelihoods: Vec<f64>,
    pub windowed: Vec<f64>,
    pub anchor: Anchor,
}

/// Result of the reliability pass over one received block, before smoothing.
///
/// Keeping this separate from the window lets a sweep evaluate many windows
/// on the same forward pass.
#[derive(Debug, Clone)]
pub struct StateReliability {
    pub path: SurvivorPath,
    pub likelihoods: Vec<f64>,
    period: usize,
    update_count: usize,
}

impl StateReliability {
    /// Open-start pass over `copies` concatenated replicas of `llrs`,
    /// traceback from the best final state and per-position likelihoods.
    pub fn estimate(trellis: &Trellis, llrs: &[f64], copies: usize) -> Result<Self> {
        let costs = BranchCosts::repeated(trellis, llrs, copies)?;
        let record = forward_pass_costs(trellis, &costs, StartConstraint::OpenAllZero, true)?;
        let path = traceback(trellis, &record, best_final_state(&record));
        let likelihoods = compute_state_likelihoods(&record, &path.states)?;
        Ok(Self {
            path,
            likelihoods,
            period: llrs.len() / trellis.n_out(),
            update_count: record.update_count(),
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn update_count(&self) -> usize {
        self.update_count
    }

    pub fn with_window(&self, window: usize) -> Result<ReliabilityPath> {
        let windowed = windowed_likelihood(&self.likelihoods, window)?;
        let anchor = select_anchor(&windowed, &self.path.states, self.period);
        Ok(ReliabilityPath {
            states: self.path.states.clone(),
            likelihoods: self.likelihoods.clone(),
            windowed,
            anchor,
        })
    }

    /// Anchor only, without materialising the smoothed sequence twice.
    pub fn anchor(&self, window: usize) -> Result<Anchor> {
        let windowed = windowed_likelihood(&self.likelihoods, window)?;
        Ok(select_anchor(&windowed, &self.path.states, self.period))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::encode_tailbiting;
    use crate::trellis::{build_trellis, CodeSpec};
    use crate::viterbi::forward_pass;

    fn t75() -> Trellis {
        build_trellis(&CodeSpec::from_octal("7,5", None).unwrap())
    }

    #[test]
    fn one_merge() {
        // single stage into state 0: candidates 0 (from 0) and 2 (from 1)
        let t = t75();
        let rec = forward_pass(&t, &[1.0, 1.0], StartConstraint::OpenAllZero, true).unwrap();
        let l = compute_state_likelihoods(&rec, &[0, 0]).unwrap();
        // L_0 = 2, L_1 never excluded -> saturated to the max finite (2)
        assert_eq!(l, vec![2.0, 2.0]);
    }

    #[test]
    fn needs_deltas() {
        let t = t75();
        let rec = forward_pass(&t, &[1.0, 1.0], StartConstraint::OpenAllZero, false).unwrap();
        assert!(compute_state_likelihoods(&rec, &[0, 0]).is_err());
        let rec = forward_pass(&t, &[1.0, 1.0], StartConstraint::OpenAllZero, true).unwrap();
        assert!(compute_state_likelihoods(&rec, &[0]).is_err());
    }

    #[test]
    fn window_examples() {
        let l = [4.0, 0.0, 2.0];
        assert_eq!(windowed_likelihood(&l, 1).unwrap(), l.to_vec());
        assert_eq!(windowed_likelihood(&l, 2).unwrap(), vec![4.0, 2.0, 2.0]);
        assert_eq!(windowed_likelihood(&l, 3).unwrap(), vec![6.0, 2.0, 2.0]);
        assert!(windowed_likelihood(&l, 0).is_err());
        assert!(windowed_likelihood(&l, 4).is_err());
    }

    #[test]
    fn anchor_examples() {
        let path = [7, 8, 9];
        let a = select_anchor(&[1.0, 5.0, 3.0], &path, 2);
        assert_eq!((a.position, a.state, a.replica), (1, 8, 0));
        let a = select_anchor(&[2.0, 2.0, 2.0], &path, 2);
        assert_eq!((a.position, a.state), (0, 7));
        let a = select_anchor(&[0.0, 1.0, 3.0], &path, 2);
        assert_eq!((a.position, a.state, a.replica), (0, 9, 1));
    }

    #[test]
    fn noiseless_likelihoods_are_large() {
        let t = t75();
        let info = [1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0];
        let llrs: Vec<f64> = encode_tailbiting(&t, &info)
            .unwrap()
            .iter()
            .map(|&b| if b == 0 { 8.0 } else { -8.0 })
            .collect();
        let rel = StateReliability::estimate(&t, &llrs, 1).unwrap();
        assert_eq!(rel.path.bits, info);
        assert!(
            rel.likelihoods.iter().all(|&l| l >= 8.0),
            "{:?}",
            rel.likelihoods
        );
    }

    #[test]
    fn uninformative_block_has_zero_likelihoods() {
        let t = t75();
        let rec = forward_pass(&t, &[0.0; 8], StartConstraint::OpenAllZero, true).unwrap();
        let path = traceback(&t, &rec, 0);
        let l = compute_state_likelihoods(&rec, &path.states).unwrap();
        assert!(l.iter().all(|&v| v == 0.0));
    }
}
