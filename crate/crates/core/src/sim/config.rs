//! Flat `key = value` configuration, list/range syntax and code presets.
//!
//! Keys: `preset`, `code`, `constraint_length`, `info_len`, `decoders`,
//! `channel`, `snr`, `window`, `copies`, `cva_copies`, `cva_replica`
//! (`last` or a 0-based index), `min_errors`, `max_blocks`, `seed`,
//! `stop_bler`, `out`, `windows`, `blocks`.
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::SimConfig;
use crate::decode::DecoderKind;
use crate::error::{Error, Result};
use crate::trellis::CodeSpec;
use crate::tsva::TsvaConfig;

/// A code/block-length pair with its tuned smoothing window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodePreset {
    pub name: &'static str,
    pub generators: &'static str,
    pub info_len: usize,
    /// Window minimising the state-decision error (from `tbsim sweep-window`).
    pub window: usize,
}

impl CodePreset {
    pub fn code(&self) -> CodeSpec {
        CodeSpec::from_octal(self.generators, None).expect("preset generators are valid")
    }

    pub fn sim_config(&self) -> SimConfig {
        let mut cfg = SimConfig::new(self.code(), self.info_len);
        cfg.tsva.window = self.window;
        cfg
    }
}

pub const PRESETS: [CodePreset; 2] = [
    CodePreset {
        name: "k7-96-48",
        generators: "171,133",
        info_len: 48,
        window: 20,
    },
    CodePreset {
        name: "k7-120-40",
        generators: "171,133,165",
        info_len: 40,
        window: 16,
    },
];

pub fn preset(name: &str) -> Result<CodePreset> {
    PRESETS
        .iter()
        .copied()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("unknown preset {name:?}")))
}

pub type Settings = BTreeMap<String, String>;

pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut settings = Settings::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
        settings.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(settings)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("{key}: cannot parse {value:?}: {e}")))
}

/// `"0:0.5:6"` (inclusive start:step:stop), `"2,4"` or `"3"`.
/// `"inf"` is accepted as a noiseless operating point.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop): (f64, f64, f64) = (
                parse_num("range", start)?,
                parse_num("range", step)?,
                parse_num("range", stop)?,
            );
            if !step.is_finite()
                || step <= 0.0
                || !start.is_finite()
                || !stop.is_finite()
                || stop < start
            {
                return Err(Error::Config(format!("bad range {text:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        [single] => single
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_num("list", s))
            .collect(),
        _ => Err(Error::Config(format!("bad list {text:?}"))),
    }
}

/// `"1:32"` (inclusive), `"1:2:31"`, or `"1,4,8"`.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop] => {
            let (start, stop): (usize, usize) =
                (parse_num("range", start)?, parse_num("range", stop)?);
            (start..=stop).collect()
        }
        [start, step, stop] => {
            let (start, step, stop): (usize, usize, usize) = (
                parse_num("range", start)?,
                parse_num("range", step)?,
                parse_num("range", stop)?,
            );
            if step == 0 {
                return Err(Error::Config(format!("bad range {text:?}")));
            }
            (start..=stop).step_by(step).collect()
        }
        [single] => single
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_num("list", s))
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::Config(format!("bad list {text:?}"))),
    };
    if values.is_empty() {
        return Err(Error::Config(format!("empty list {text:?}")));
    }
    Ok(values)
}

/// Builds a [`SimConfig`] from settings, starting from the named preset (if
/// any) and falling back to defaults for anything unspecified.
pub fn sim_config_from(settings: &Settings) -> Result<SimConfig> {
    let get = |k: &str| settings.get(k).map(String::as_str);
    let base = get("preset").map(preset).transpose()?;
    let constraint_length = get("constraint_length")
        .map(|v| parse_num("constraint_length", v))
        .transpose()?;
    let code = match (get("code"), base) {
        (Some(text), _) => CodeSpec::from_octal(text, constraint_length)?,
        (None, Some(p)) => p.code(),
        (None, None) => return Err(Error::Config("no code given (use code= or preset=)".into())),
    };
    let info_len = match (get("info_len"), base) {
        (Some(v), _) => parse_num("info_len", v)?,
        (None, Some(p)) => p.info_len,
        (None, None) => return Err(Error::Config("no info_len given".into())),
    };
    let mut cfg = SimConfig::new(code, info_len);
    if let Some(p) = base {
        cfg.tsva.window = p.window;
    }
    if let Some(v) = get("decoders") {
        cfg.decoders = DecoderKind::parse_list(v)?;
    }
    if let Some(v) = get("channel") {
        cfg.channel = v.parse()?;
    }
    if let Some(v) = get("snr") {
        cfg.snr_db = parse_f64_list(v)?;
    }
    let window = get("window").map(|v| parse_num("window", v)).transpose()?;
    let copies = get("copies").map(|v| parse_num("copies", v)).transpose()?;
    cfg.tsva = TsvaConfig::new(
        window.unwrap_or(cfg.tsva.window),
        copies.unwrap_or(cfg.tsva.copies),
    )?;
    if let Some(v) = get("cva_copies") {
        cfg.cva_copies = parse_num("cva_copies", v)?;
    }
    match get("cva_replica") {
        None | Some("last") => {}
        Some(v) => cfg.cva_replica = Some(parse_num("cva_replica", v)?),
    }
    if let Some(v) = get("min_errors") {
        cfg.min_block_errors = parse_num("min_errors", v)?;
    }
    if let Some(v) = get("max_blocks") {
        cfg.max_blocks = parse_num("max_blocks", v)?;
    }
    if let Some(v) = get("seed") {
        cfg.seed = parse_num("seed", v)?;
    }
    if let Some(v) = get("stop_bler") {
        cfg.stop_bler = Some(parse_num("stop_bler", v)?);
    }
    cfg.validate()?;
    Ok(cfg)
}
