use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tailbiting::sim::config::{parse_settings, parse_usize_list, sim_config_from, Settings};
use tailbiting::sim::csv::{emit_csv, write_bler_csv, write_window_csv};
use tailbiting::sim::{run_curve, run_window_sweep};
use tailbiting::{Error, Result};

/// Monte Carlo BLER simulation of tailbiting convolutional decoders.
#[derive(Parser)]
#[command(name = "tbsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BLER/BER curves for a set of decoders.
    Simulate(Common),
    /// State-decision error of the anchor selection versus window size.
    SweepWindow {
        #[command(flatten)]
        common: Common,
        /// Window sizes, e.g. `1:32` or `2,4,8`.
        #[arg(long)]
        windows: Option<String>,
        /// Blocks per SNR.
        #[arg(long)]
        blocks: Option<u64>,
    },
}

#[derive(Args)]
struct Common {
    /// key=value file; command-line flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named code/block-length preset (k7-96-48, k7-120-40).
    #[arg(long)]
    preset: Option<String>,
    /// Octal generators, e.g. `171,133`.
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    constraint_length: Option<usize>,
    #[arg(long)]
    info_len: Option<usize>,
    /// Comma-separated subset of tsva,ml,cva,exhaustive.
    #[arg(long)]
    decoders: Option<String>,
    /// Eb/N0 points in dB: `0:0.5:6`, `2,4` or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// awgn or flat_rayleigh.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    window: Option<usize>,
    /// Block replicas in the reliability pass.
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long)]
    cva_copies: Option<usize>,
    /// Replica the CVA decodes from: `last` or a 0-based index.
    #[arg(long)]
    cva_replica: Option<String>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    max_blocks: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Stop simulating a decoder once its BLER is below this.
    #[arg(long)]
    stop_bler: Option<f64>,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let mut settings = match &self.config {
            Some(path) => parse_settings(&fs::read_to_string(path)?)?,
            None => Settings::new(),
        };
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                settings.insert(key.to_string(), v);
            }
        };
        set("preset", self.preset.clone());
        set("code", self.code.clone());
        set(
            "constraint_length",
            self.constraint_length.map(|v| v.to_string()),
        );
        set("info_len", self.info_len.map(|v| v.to_string()));
        set("decoders", self.decoders.clone());
        set("snr", self.snr.clone());
        set("channel", self.channel.clone());
        set("window", self.window.map(|v| v.to_string()));
        set("copies", self.copies.map(|v| v.to_string()));
        set("cva_copies", self.cva_copies.map(|v| v.to_string()));
        set("cva_replica", self.cva_replica.clone());
        set("min_errors", self.min_errors.map(|v| v.to_string()));
        set("max_blocks", self.max_blocks.map(|v| v.to_string()));
        set("seed", self.seed.map(|v| v.to_string()));
        set("stop_bler", self.stop_bler.map(|v| v.to_string()));
        set("out", self.out.as_ref().map(|p| p.display().to_string()));
        set("threads", self.threads.map(|v| v.to_string()));
        Ok(settings)
    }
}

fn init_threads(settings: &Settings) -> Result<()> {
    if let Some(v) = settings.get("threads") {
        let threads: usize = v
            .parse()
            .map_err(|e| Error::Config(format!("threads: {e}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(common) => {
            let settings = common.settings()?;
            init_threads(&settings)?;
            let cfg = sim_config_from(&settings)?;
            eprintln!(
                "code {} L={} channel {} window {} copies {}",
                cfg.code, cfg.info_len, cfg.channel, cfg.tsva.window, cfg.tsva.copies
            );
            let points = run_curve(&cfg, |p| {
                eprintln!(
                    "snr {:>5.2} dB  {:<10} blocks {:>9}  errors {:>5}  bler {:.3e}  ber {:.3e}{}",
                    p.snr_db,
                    p.decoder.name(),
                    p.blocks_sent,
                    p.block_errors,
                    p.bler,
                    p.ber,
                    if p.capped { "  (capped)" } else { "" }
                );
            })?;
            match settings.get("out") {
                Some(path) => emit_csv(path.as_ref(), &points)?,
                None => write_bler_csv(io::stdout().lock(), &points)?,
            }
        }
        Command::SweepWindow {
            common,
            windows,
            blocks,
        } => {
            let mut settings = common.settings()?;
            if let Some(w) = windows {
                settings.insert("windows".into(), w);
            }
            if let Some(b) = blocks {
                settings.insert("blocks".into(), b.to_string());
            }
            settings
                .entry("decoders".into())
                .or_insert_with(|| "tsva".into());
            init_threads(&settings)?;
            let cfg = sim_config_from(&settings)?;
            let windows = parse_usize_list(settings.get("windows").map_or("1:16", String::as_str))?;
            let blocks = settings
                .get("blocks")
                .map(|v| v.parse::<u64>())
                .transpose()
                .map_err(|e| Error::Config(format!("blocks: {e}")))?
                .unwrap_or(10_000);
            let cells = run_window_sweep(&cfg, &windows, &cfg.snr_db, blocks)?;
            match settings.get("out") {
                Some(path) => write_window_csv(fs::File::create(path)?, &cells)?,
                None => write_window_csv(io::stdout().lock(), &cells)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tbsim: {e}");
            ExitCode::FAILURE
        }
    }
}
