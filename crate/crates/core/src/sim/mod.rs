//! Monte Carlo BLER campaigns and the window-size sweep.
//!
//! Every trial draws its info block and channel noise from its own stream,
//! seeded with `seed ^ trial_index`, so results do not depend on how many
//! worker threads run the trials. Trials run in fixed-size batches; the
//! batch outcomes are then tallied in trial order and tallying stops at the
//! exact trial that satisfies the stopping rule.

pub mod config;
pub mod csv;
pub mod stats;
pub mod sweep;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{CvaDecoder, ExhaustiveDecoder, MlDecoder};
use crate::channel::{demap_llr, modulate_qpsk, transmit, ChannelConfig, ChannelModel};
use crate::decode::{Decoder, DecoderKind};
use crate::encoder::encode_tailbiting;
use crate::error::{Error, Result};
use crate::trellis::{build_trellis, CodeSpec, Trellis};
use crate::tsva::{TsvaConfig, TsvaDecoder};

pub use config::{CodePreset, PRESETS};
pub use sweep::{run_window_sweep, WindowCell};

/// Trials evaluated per parallel batch.
const BATCH: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub code: CodeSpec,
    pub info_len: usize,
    pub decoders: Vec<DecoderKind>,
    pub channel: ChannelModel,
    pub snr_db: Vec<f64>,
    pub min_block_errors: u64,
    pub max_blocks: u64,
    pub seed: u64,
    pub tsva: TsvaConfig,
    pub cva_copies: usize,
    /// Replica the CVA reads its decisions from; `None` means the last.
    pub cva_replica: Option<usize>,
    /// Drop a decoder from the rest of the curve once its BLER falls below this.
    pub stop_bler: Option<f64>,
}

impl SimConfig {
    pub fn new(code: CodeSpec, info_len: usize) -> Self {
        Self {
            code,
            info_len,
            decoders: vec![DecoderKind::Tsva, DecoderKind::Ml, DecoderKind::CvaFixed],
            channel: ChannelModel::Awgn,
            snr_db: vec![0.0],
            min_block_errors: 100,
            max_blocks: 10_000_000,
            seed: 0,
            tsva: TsvaConfig::default(),
            cva_copies: 2,
            cva_replica: None,
            stop_bler: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.info_len < self.code.memory().max(1) {
            return Err(Error::Config(format!(
                "info length {} shorter than encoder memory {}",
                self.info_len,
                self.code.memory()
            )));
        }
        if !(self.info_len * self.code.n_out()).is_multiple_of(2) {
            return Err(Error::Config(
                "QPSK needs an even coded block length".into(),
            ));
        }
        if self.min_block_errors == 0 {
            return Err(Error::Config("min_block_errors must be at least 1".into()));
        }
        if self.max_blocks < self.min_block_errors {
            return Err(Error::Config(
                "max_blocks must be >= min_block_errors".into(),
            ));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("no decoders selected".into()));
        }
        if self.cva_copies < 2 {
            return Err(Error::Config("cva_copies must be at least 2".into()));
        }
        if self.cva_replica.is_some_and(|r| r >= self.cva_copies) {
            return Err(Error::Config("cva_replica must be below cva_copies".into()));
        }
        if self.tsva.window > self.tsva.copies * self.info_len + 1 {
            return Err(Error::Config(format!(
                "window {} longer than the reliability path",
                self.tsva.window
            )));
        }
        for &snr in &self.snr_db {
            ChannelConfig::new(self.channel, snr, self.code.rate())?;
        }
        Ok(())
    }

    pub fn build_decoder(&self, kind: DecoderKind) -> Result<Box<dyn Decoder>> {
        let trellis = build_trellis(&self.code);
        Ok(match kind {
            DecoderKind::Tsva => Box::new(TsvaDecoder::new(trellis, self.tsva)),
            DecoderKind::Ml => Box::new(MlDecoder::new(trellis)),
            DecoderKind::CvaFixed => Box::new(CvaDecoder::with_replica(
                trellis,
                self.cva_copies,
                self.cva_replica.unwrap_or(self.cva_copies - 1),
            )?),
            DecoderKind::Exhaustive => Box::new(ExhaustiveDecoder::new(trellis)),
        })
    }
}

/// One transmitted block as seen by the decoder.
#[derive(Debug, Clone)]
pub struct Trial {
    pub info: Vec<u8>,
    pub llrs: Vec<f64>,
}

/// Encoder, modulator, channel and demapper for one code and block length.
#[derive(Debug, Clone)]
pub struct Link {
    trellis: Trellis,
    info_len: usize,
    model: ChannelModel,
    seed: u64,
}

impl Link {
    pub fn new(code: &CodeSpec, info_len: usize, model: ChannelModel, seed: u64) -> Self {
        Self {
            trellis: build_trellis(code),
            info_len,
            model,
            seed,
        }
    }

    pub fn from_config(cfg: &SimConfig) -> Self {
        Self::new(&cfg.code, cfg.info_len, cfg.channel, cfg.seed)
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }

    /// Block number `index` at `snr_db`, reproducible from `(seed, index)`.
    pub fn trial(&self, snr_db: f64, index: u64) -> Result<Trial> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ index);
        let info: Vec<u8> = (0..self.info_len)
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let coded = encode_tailbiting(&self.trellis, &info)?;
        let channel = ChannelConfig::new(self.model, snr_db, self.trellis.spec().rate())?;
        let received = transmit(&modulate_qpsk(&coded), &channel, &mut rng);
        let llrs = demap_llr(&received, channel.demap_variance())?;
        Ok(Trial { info, llrs })
    }
}

/// Outcome of one operating point for one decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub decoder: DecoderKind,
    pub blocks_sent: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub updates_per_block: u64,
    pub elapsed: Duration,
    /// The block cap was hit before `min_block_errors` errors were seen.
    pub capped: bool,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    bit_errors: u64,
    updates: u64,
}

/// Simulates blocks until `min_block_errors` block errors or `max_blocks`.
pub fn run_point(cfg: &SimConfig, snr_db: f64, kind: DecoderKind) -> Result<BlerPoint> {
    cfg.validate()?;
    let link = Link::from_config(cfg);
    let decoder = cfg.build_decoder(kind)?;
    run_point_with(
        &link,
        decoder.as_ref(),
        snr_db,
        cfg.min_block_errors,
        cfg.max_blocks,
    )
}

pub fn run_point_with(
    link: &Link,
    decoder: &dyn Decoder,
    snr_db: f64,
    min_block_errors: u64,
    max_blocks: u64,
) -> Result<BlerPoint> {
    let started = Instant::now();
    let (mut blocks, mut block_errors, mut bit_errors, mut updates) = (0u64, 0u64, 0u64, 0u64);
    'outer: while blocks < max_blocks {
        let end = (blocks + BATCH).min(max_blocks);
        let outcomes = (blocks..end)
            .into_par_iter()
            .map(|index| {
                let trial = link.trial(snr_db, index)?;
                let decoded = decoder.decode(&trial.llrs)?;
                let bit_errors = decoded
                    .info_bits
                    .iter()
                    .zip(&trial.info)
                    .filter(|(a, b)| a != b)
                    .count() as u64;
                Ok(Outcome {
                    bit_errors,
                    updates: decoded.update_count as u64,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for outcome in outcomes {
            blocks += 1;
            bit_errors += outcome.bit_errors;
            updates += outcome.updates;
            if outcome.bit_errors > 0 {
                block_errors += 1;
                if block_errors >= min_block_errors {
                    break 'outer;
                }
            }
        }
    }
    let info_bits = blocks * link.info_len as u64;
    Ok(BlerPoint {
        snr_db,
        decoder: decoder.kind(),
        blocks_sent: blocks,
        block_errors,
        bler: ratio(block_errors, blocks),
        bit_errors,
        ber: ratio(bit_errors, info_bits),
        updates_per_block: updates.checked_div(blocks).unwrap_or(0),
        elapsed: started.elapsed(),
        capped: block_errors < min_block_errors,
    })
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// All `(snr, decoder)` points of `cfg`, SNR-major. With `stop_bler` set, a
/// decoder is skipped at the SNRs after its first point below it.
pub fn run_curve(cfg: &SimConfig, mut progress: impl FnMut(&BlerPoint)) -> Result<Vec<BlerPoint>> {
    cfg.validate()?;
    let link = Link::from_config(cfg);
    let decoders = cfg
        .decoders
        .iter()
        .map(|&k| cfg.build_decoder(k))
        .collect::<Result<Vec<_>>>()?;
    let mut active = vec![true; decoders.len()];
    let mut points = Vec::new();
    for &snr in &cfg.snr_db {
        for (decoder, live) in decoders.iter().zip(active.iter_mut()) {
            if !*live {
                continue;
            }
            let point = run_point_with(
                &link,
                decoder.as_ref(),
                snr,
                cfg.min_block_errors,
                cfg.max_blocks,
            )?;
            progress(&point);
            *live = cfg.stop_bler.is_none_or(|t| point.bler >= t);
            points.push(point);
        }
        if !active.contains(&true) {
            break;
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SimConfig {
        let mut cfg = SimConfig::new(CodeSpec::from_octal("7,5", None).unwrap(), 8);
        cfg.min_block_errors = 20;
        cfg.max_blocks = 5_000;
        cfg.seed = 7;
        cfg
    }

    #[test]
    fn noiseless_point_hits_cap() {
        let mut cfg = small_cfg();
        cfg.max_blocks = 300;
        let p = run_point(&cfg, f64::INFINITY, DecoderKind::Tsva).unwrap();
        assert_eq!(p.bler, 0.0);
        assert_eq!(p.blocks_sent, 300);
        assert!(p.capped);
    }

    #[test]
    fn point_is_deterministic_and_stops_at_min_errors() {
        let cfg = small_cfg();
        let a = run_point(&cfg, 1.0, DecoderKind::Ml).unwrap();
        let b = run_point(&cfg, 1.0, DecoderKind::Ml).unwrap();
        assert_eq!(a.block_errors, 20);
        assert!(!a.capped);
        assert_eq!(
            (
                a.blocks_sent,
                a.block_errors,
                a.bit_errors,
                a.updates_per_block
            ),
            (
                b.blocks_sent,
                b.block_errors,
                b.bit_errors,
                b.updates_per_block
            )
        );
        // pruned ML: the open pass plus between one and all four fixed passes
        assert!((2 * 8..=5 * 8).contains(&a.updates_per_block));
    }

    #[test]
    fn trials_repeat() {
        let link = Link::new(
            &CodeSpec::from_octal("171,133", None).unwrap(),
            48,
            ChannelModel::Awgn,
            3,
        );
        let a = link.trial(2.0, 11).unwrap();
        let b = link.trial(2.0, 11).unwrap();
        assert_eq!(a.info, b.info);
        assert_eq!(a.llrs, b.llrs);
        assert_ne!(link.trial(2.0, 12).unwrap().info, a.info);
    }

    #[test]
    fn curve_stops_below_target() {
        let mut cfg = small_cfg();
        cfg.decoders = vec![DecoderKind::Ml];
        cfg.snr_db = vec![0.0, 10.0, 20.0];
        cfg.max_blocks = 200;
        cfg.stop_bler = Some(0.5);
        let points = run_curve(&cfg, |_| {}).unwrap();
        assert!(points.len() < 3);

        cfg.decoders = vec![DecoderKind::Ml, DecoderKind::Tsva, DecoderKind::CvaFixed];
        cfg.snr_db = vec![-2.0, 2.0, 6.0, 10.0, 14.0];
        cfg.stop_bler = Some(0.05);
        let points = run_curve(&cfg, |_| {}).unwrap();
        for kind in &cfg.decoders {
            let rows: Vec<&BlerPoint> = points.iter().filter(|p| p.decoder == *kind).collect();
            let first_below = rows.iter().position(|p| p.bler < 0.05);
            assert_eq!(
                first_below.map_or(rows.len(), |i| i + 1),
                rows.len(),
                "{kind}"
            );
        }
    }

    #[test]
    fn validation() {
        let mut cfg = small_cfg();
        cfg.min_block_errors = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.max_blocks = 5;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.info_len = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = small_cfg();
        cfg.tsva.window = 100;
        assert!(cfg.validate().is_err());
        let mut cfg = SimConfig::new(CodeSpec::from_octal("171,133,165", None).unwrap(), 41);
        cfg.snr_db = vec![1.0];
        assert!(cfg.validate().is_err());
    }
}
