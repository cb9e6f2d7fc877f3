//! State-decision error as a function of the smoothing window.
//!
//! A decision is wrong when the anchor state differs from the transmitted
//! path's state at the anchor position. The reliability pass is run once per
//! block and every window is evaluated on the same likelihoods.

use rayon::prelude::*;

use super::{Link, SimConfig};
use crate::encoder::tailbiting_path;
use crate::error::{Error, Result};
use crate::reliability::StateReliability;

#[derive(Debug, Clone, PartialEq)]
pub struct WindowCell {
    pub window: usize,
    pub snr_db: f64,
    pub info_len: usize,
    pub blocks: u64,
    pub state_errors: u64,
    pub error_rate: f64,
}

/// One cell per `(window, snr)`, SNR-major, over `blocks` blocks per SNR.
pub fn run_window_sweep(
    cfg: &SimConfig,
    windows: &[usize],
    snrs: &[f64],
    blocks: u64,
) -> Result<Vec<WindowCell>> {
    let path_len = cfg.tsva.copies * cfg.info_len + 1;
    if let Some(&bad) = windows.iter().find(|&&w| w == 0 || w > path_len) {
        return Err(Error::Config(format!(
            "window {bad} outside 1..={path_len}"
        )));
    }
    if blocks == 0 {
        return Err(Error::Config("sweep needs at least one block".into()));
    }
    let link = Link::from_config(cfg);
    let mut cells = Vec::with_capacity(windows.len() * snrs.len());
    for &snr in snrs {
        let errors = (0..blocks)
            .into_par_iter()
            .map(|index| block_decisions(&link, cfg.tsva.copies, windows, snr, index))
            .try_reduce(
                || vec![0u64; windows.len()],
                |mut acc, e| {
                    acc.iter_mut().zip(&e).for_each(|(a, b)| *a += b);
                    Ok(acc)
                },
            )?;
        cells.extend(
            windows
                .iter()
                .zip(errors)
                .map(|(&window, state_errors)| WindowCell {
                    window,
                    snr_db: snr,
                    info_len: cfg.info_len,
                    blocks,
                    state_errors,
                    error_rate: state_errors as f64 / blocks as f64,
                }),
        );
    }
    Ok(cells)
}

fn block_decisions(
    link: &Link,
    copies: usize,
    windows: &[usize],
    snr: f64,
    index: u64,
) -> Result<Vec<u64>> {
    let trial = link.trial(snr, index)?;
    let truth = tailbiting_path(link.trellis(), &trial.info)?;
    let reliability = StateReliability::estimate(link.trellis(), &trial.llrs, copies)?;
    windows
        .iter()
        .map(|&w| {
            let anchor = reliability.anchor(w)?;
            Ok(u64::from(anchor.state != truth[anchor.position]))
        })
        .collect()
}
