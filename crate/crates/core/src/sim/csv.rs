//! CSV output for BLER curves and window sweeps.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BlerPoint, WindowCell};
use crate::error::Result;

/// One row of the BLER CSV:
/// `snr_db,decoder,blocks,block_errors,bler,bit_errors,ber,updates_per_block`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlerRow {
    pub snr_db: f64,
    pub decoder: String,
    pub blocks: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub bit_errors: u64,
    pub ber: f64,
    pub updates_per_block: u64,
}

impl From<&BlerPoint> for BlerRow {
    fn from(p: &BlerPoint) -> Self {
        Self {
            snr_db: p.snr_db,
            decoder: p.decoder.name().to_string(),
            blocks: p.blocks_sent,
            block_errors: p.block_errors,
            bler: p.bler,
            bit_errors: p.bit_errors,
            ber: p.ber,
            updates_per_block: p.updates_per_block,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub window: usize,
    pub snr_db: f64,
    pub info_len: usize,
    pub blocks: u64,
    pub state_errors: u64,
    pub error_rate: f64,
}

impl From<&WindowCell> for WindowRow {
    fn from(c: &WindowCell) -> Self {
        Self {
            window: c.window,
            snr_db: c.snr_db,
            info_len: c.info_len,
            blocks: c.blocks,
            state_errors: c.state_errors,
            error_rate: c.error_rate,
        }
    }
}

const BLER_HEADER: [&str; 8] = [
    "snr_db",
    "decoder",
    "blocks",
    "block_errors",
    "bler",
    "bit_errors",
    "ber",
    "updates_per_block",
];

const WINDOW_HEADER: [&str; 6] = [
    "window",
    "snr_db",
    "info_len",
    "blocks",
    "state_errors",
    "error_rate",
];

fn write_rows<W: Write, R: Serialize>(
    writer: W,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    // written explicitly so an empty table still gets its header
    out.write_record(header)?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_bler_csv<W: Write>(writer: W, points: &[BlerPoint]) -> Result<()> {
    write_rows(writer, &BLER_HEADER, points.iter().map(BlerRow::from))
}

pub fn read_bler_csv<R: Read>(reader: R) -> Result<Vec<BlerRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Writes the BLER CSV to `path`.
pub fn emit_csv(path: &Path, points: &[BlerPoint]) -> Result<()> {
    write_bler_csv(File::create(path)?, points)
}

pub fn write_window_csv<W: Write>(writer: W, cells: &[WindowCell]) -> Result<()> {
    write_rows(writer, &WINDOW_HEADER, cells.iter().map(WindowRow::from))
}

pub fn read_window_csv<R: Read>(reader: R) -> Result<Vec<WindowRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}
