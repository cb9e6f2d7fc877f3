//! Add-compare-select kernel shared by every decoder.
//!
//! Path lengths are costs to minimise. The branch cost of an edge is
//! `sum_c llr[c] * x[c]` where `x[c]` is the edge's coded bit, so with
//! `llr = log P(0)/P(1)` the cheapest path is the maximum-likelihood one.
//!
//! A forward pass can additionally record, for every state and stage, the
//! difference between the discarded and the surviving candidate lengths
//! (`delta`). Those values feed the reliability estimation in
//! [`crate::reliability`].

use crate::error::{Error, Result};
use crate::trellis::Trellis;

/// Cost of one trellis branch: `sum_c llr[c] * expected[c]`.
pub fn branch_metric(llrs: &[f64], expected: &[u8]) -> f64 {
    debug_assert_eq!(llrs.len(), expected.len());
    llrs.iter()
        .zip(expected)
        .filter(|(_, &bit)| bit != 0)
        .map(|(&l, _)| l)
        .sum()
}

/// Branch costs of every output word at every stage.
///
/// Built once per received block and shared by all passes over it (the
/// `2^M` runs of ML decoding, or the concatenated copies of a circular pass).
#[derive(Debug, Clone)]
pub struct BranchCosts {
    num_words: usize,
    costs: Vec<f64>,
    abs_total: f64,
}

impl BranchCosts {
    pub fn new(trellis: &Trellis, llrs: &[f64]) -> Result<Self> {
        Self::repeated(trellis, llrs, 1)
    }

    /// Costs for `copies` back-to-back replicas of `llrs`.
    pub fn repeated(trellis: &Trellis, llrs: &[f64], copies: usize) -> Result<Self> {
        let n_out = trellis.n_out();
        if llrs.is_empty() || !llrs.len().is_multiple_of(n_out) {
            return Err(Error::Input(format!(
                "{} LLRs is not a positive multiple of {n_out}",
                llrs.len()
            )));
        }
        if copies == 0 {
            return Err(Error::Config("at least one copy is required".into()));
        }
        if let Some(bad) = llrs.iter().find(|l| !l.is_finite()) {
            return Err(Error::Input(format!("non-finite LLR {bad}")));
        }
        let num_words = trellis.num_words();
        let stages = llrs.len() / n_out;
        let mut costs = Vec::with_capacity(stages * num_words * copies);
        for segment in llrs.chunks_exact(n_out) {
            for word in 0..num_words {
                costs.push(
                    segment
                        .iter()
                        .enumerate()
                        .filter(|(c, _)| (word >> c) & 1 == 1)
                        .map(|(_, &l)| l)
                        .sum(),
                );
            }
        }
        let single = costs.len();
        for _ in 1..copies {
            costs.extend_from_within(..single);
        }
        let abs_total = copies as f64 * llrs.iter().map(|l| l.abs()).sum::<f64>();
        Ok(Self {
            num_words,
            costs,
            abs_total,
        })
    }

    pub fn stages(&self) -> usize {
        self.costs.len() / self.num_words
    }

    /// Cost of output `word` on the edge into stage `stage + 1`.
    #[inline]
    pub fn cost(&self, stage: usize, word: u32) -> f64 {
        self.costs[stage * self.num_words + word as usize]
    }

    /// Costs of all output words for stage `stage`, indexed by word.
    #[inline]
    pub fn stage(&self, stage: usize) -> &[f64] {
        &self.costs[stage * self.num_words..(stage + 1) * self.num_words]
    }

    /// Upper bound on the magnitude of any path length.
    pub fn abs_total(&self) -> f64 {
        self.abs_total
    }
}

/// Initial metric assignment for a forward pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartConstraint {
    /// Every state starts with metric zero.
    OpenAllZero,
    /// Only the given state is allowed; the others start saturated.
    FixedState(usize),
}

/// Everything a forward pass leaves behind for traceback and reliability.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardRecord {
    num_states: usize,
    stages: usize,
    metrics: Vec<f64>,
    survivors: Vec<u32>,
    deltas: Option<Vec<f64>>,
    saturation: f64,
    update_count: usize,
}

impl ForwardRecord {
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Accumulated metric of the survivor into `state` at position `i`, `0 <= i <= T`.
    pub fn metric(&self, i: usize, state: usize) -> f64 {
        self.metrics[i * self.num_states + state]
    }

    pub fn final_metrics(&self) -> &[f64] {
        &self.metrics[self.stages * self.num_states..]
    }

    /// Survivor predecessor of `state` at position `i`, `1 <= i <= T`.
    pub fn survivor_predecessor(&self, i: usize, state: usize) -> usize {
        self.survivors[(i - 1) * self.num_states + state] as usize
    }

    /// The predecessor whose candidate was discarded at `(i, state)`.
    ///
    /// The two predecessors of a shift-register state differ only in their
    /// least significant bit.
    pub fn discarded_predecessor(&self, i: usize, state: usize) -> usize {
        self.survivor_predecessor(i, state) ^ 1
    }

    /// Discarded minus surviving candidate length at `(i, state)`, if recorded.
    pub fn delta(&self, i: usize, state: usize) -> Option<f64> {
        self.deltas
            .as_ref()
            .map(|d| d[(i - 1) * self.num_states + state])
    }

    pub fn has_deltas(&self) -> bool {
        self.deltas.is_some()
    }

    /// Finite stand-in for an infinite metric.
    pub fn saturation(&self) -> f64 {
        self.saturation
    }

    /// Trellis stages processed.
    pub fn update_count(&self) -> usize {
        self.update_count
    }
}

pub fn forward_pass(
    trellis: &Trellis,
    llrs: &[f64],
    start: StartConstraint,
    record_deltas: bool,
) -> Result<ForwardRecord> {
    let costs = BranchCosts::new(trellis, llrs)?;
    forward_pass_costs(trellis, &costs, start, record_deltas)
}

/// Forward pass over precomputed branch costs.
///
/// On equal candidate lengths the lower-index predecessor survives.
pub fn forward_pass_costs(
    trellis: &Trellis,
    costs: &BranchCosts,
    start: StartConstraint,
    record_deltas: bool,
) -> Result<ForwardRecord> {
    let num_states = trellis.num_states();
    let stages = costs.stages();
    // at least 10x any reachable |path length|
    let saturation = 10.0 * (costs.abs_total() + 1.0);

    let mut metrics = vec![0.0f64; (stages + 1) * num_states];
    if let StartConstraint::FixedState(s) = start {
        if s >= num_states {
            return Err(Error::Input(format!("start state {s} out of range")));
        }
        metrics[..num_states].fill(saturation);
        metrics[s] = 0.0;
    }
    let mut survivors = vec![0u32; stages * num_states];
    let mut deltas = record_deltas.then(|| vec![0.0f64; stages * num_states]);

    let half = num_states / 2;
    let butterflies = trellis.butterflies();
    for stage in 0..stages {
        let (done, rest) = metrics.split_at_mut((stage + 1) * num_states);
        let prev = &done[stage * num_states..];
        let (next_lo, next_hi) = rest[..num_states].split_at_mut(half);
        let (surv_lo, surv_hi) =
            survivors[stage * num_states..(stage + 1) * num_states].split_at_mut(half);
        let cost = costs.stage(stage);
        for j in 0..half {
            let (m0, m1) = (prev[2 * j], prev[2 * j + 1]);
            let w = butterflies[j];
            // state j (input 0) and state j + half (input 1)
            let lo = select(m0, m1, cost[w[0] as usize], cost[w[1] as usize], saturation);
            let hi = select(m0, m1, cost[w[2] as usize], cost[w[3] as usize], saturation);
            next_lo[j] = lo.best;
            next_hi[j] = hi.best;
            surv_lo[j] = (2 * j + lo.second as usize) as u32;
            surv_hi[j] = (2 * j + hi.second as usize) as u32;
            if let Some(d) = deltas.as_mut() {
                let at = stage * num_states;
                d[at + j] = lo.delta;
                d[at + j + half] = hi.delta;
            }
        }
    }
    debug_assert!(metrics[stages * num_states..]
        .iter()
        .any(|&m| m < 0.5 * saturation));

    Ok(ForwardRecord {
        num_states,
        stages,
        metrics,
        survivors,
        deltas,
        saturation,
        update_count: stages,
    })
}

struct Selection {
    best: f64,
    delta: f64,
    /// The odd predecessor won.
    second: bool,
}

/// Compare-select of two candidates; ties keep the even (lower) predecessor.
#[inline(always)]
fn select(m0: f64, m1: f64, b0: f64, b1: f64, saturation: f64) -> Selection {
    let c0 = (m0 + b0).min(saturation);
    let c1 = (m1 + b1).min(saturation);
    if c1 < c0 {
        Selection {
            best: c1,
            delta: c0 - c1,
            second: true,
        }
    } else {
        Selection {
            best: c0,
            delta: c1 - c0,
            second: false,
        }
    }
}

/// A traced-back survivor path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorPath {
    /// States at positions `0..=T`.
    pub states: Vec<usize>,
    /// Info bit of each stage, `T` entries.
    pub bits: Vec<u8>,
}

impl SurvivorPath {
    pub fn is_tailbiting(&self) -> bool {
        self.states.first() == self.states.last()
    }
}

pub fn traceback(trellis: &Trellis, record: &ForwardRecord, final_state: usize) -> SurvivorPath {
    let stages = record.stages();
    let mut states = vec![0usize; stages + 1];
    states[stages] = final_state;
    for i in (1..=stages).rev() {
        states[i - 1] = record.survivor_predecessor(i, states[i]);
    }
    let bits = states[1..]
        .iter()
        .map(|&s| trellis.input_bit_into(s))
        .collect();
    SurvivorPath { states, bits }
}

/// Final state with the smallest accumulated metric, lowest index on ties.
pub fn best_final_state(record: &ForwardRecord) -> usize {
    argmin(record.final_metrics())
}

pub(crate) fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
        )
        .0
}
