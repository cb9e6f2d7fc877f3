//! Gray QPSK mapping, AWGN / flat-Rayleigh channels and LLR demapping.
//!
//! LLRs follow the convention `log P(bit = 0) / P(bit = 1)`, so a positive
//! value favours a zero.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Awgn,
    /// Independent complex-Gaussian gain per symbol, known at the receiver.
    FlatRayleigh,
}

impl FromStr for ChannelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "awgn" => Ok(Self::Awgn),
            "flat_rayleigh" | "rayleigh" => Ok(Self::FlatRayleigh),
            other => Err(Error::Config(format!("unknown channel model {other:?}"))),
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Awgn => "awgn",
            Self::FlatRayleigh => "flat_rayleigh",
        })
    }
}

/// Channel operating point.
///
/// `snr_db` is Eb/N0 per info bit. `f64::INFINITY` selects a noiseless channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub model: ChannelModel,
    pub snr_db: f64,
    pub code_rate: f64,
}

impl ChannelConfig {
    pub fn new(model: ChannelModel, snr_db: f64, code_rate: f64) -> Result<Self> {
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(Error::Config(format!("invalid snr {snr_db} dB")));
        }
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(Error::Config(format!("invalid code rate {code_rate}")));
        }
        Ok(Self {
            model,
            snr_db,
            code_rate,
        })
    }

    pub fn is_noiseless(&self) -> bool {
        self.snr_db == f64::INFINITY
    }

    /// Noise variance per real dimension for unit-energy QPSK:
    /// `1 / (2 * rate * 2 * 10^(snr_db / 10))`.
    pub fn noise_variance(&self) -> f64 {
        if self.is_noiseless() {
            return 0.0;
        }
        1.0 / (2.0 * self.code_rate * 2.0 * 10f64.powf(self.snr_db / 10.0))
    }

    /// Variance handed to the demapper. A noiseless channel still needs a
    /// positive scale; any value gives the same decisions.
    pub fn demap_variance(&self) -> f64 {
        if self.is_noiseless() {
            1.0
        } else {
            self.noise_variance()
        }
    }
}

/// Gray QPSK: bit pair `(b0, b1)` maps to `((1 - 2 b0), (1 - 2 b1)) / sqrt(2)`.
///
/// Panics on an odd number of bits; every supported block shape is even.
pub fn modulate_qpsk(coded: &[u8]) -> Vec<Complex64> {
    assert!(
        coded.len().is_multiple_of(2),
        "QPSK needs an even number of coded bits"
    );
    let amp = |b: u8| {
        if b == 0 {
            FRAC_1_SQRT_2
        } else {
            -FRAC_1_SQRT_2
        }
    };
    coded
        .chunks_exact(2)
        .map(|p| Complex64::new(amp(p[0]), amp(p[1])))
        .collect()
}

/// Channel output together with the per-symbol gains (ideal CSI).
#[derive(Debug, Clone)]
pub struct Received {
    pub symbols: Vec<Complex64>,
    pub gains: Vec<Complex64>,
}

pub fn transmit<R: Rng + ?Sized>(
    symbols: &[Complex64],
    cfg: &ChannelConfig,
    rng: &mut R,
) -> Received {
    let sigma = cfg.noise_variance().sqrt();
    let mut gauss = || -> f64 { rng.sample(StandardNormal) };
    let mut out = Vec::with_capacity(symbols.len());
    let mut gains = Vec::with_capacity(symbols.len());
    for &x in symbols {
        let h = match cfg.model {
            ChannelModel::Awgn => Complex64::new(1.0, 0.0),
            ChannelModel::FlatRayleigh => Complex64::new(gauss(), gauss()) * FRAC_1_SQRT_2,
        };
        let mut y = h * x;
        if sigma > 0.0 {
            y += Complex64::new(gauss(), gauss()) * sigma;
        }
        out.push(y);
        gains.push(h);
    }
    Received {
        symbols: out,
        gains,
    }
}

/// Per-dimension LLRs `2 Re/Im(conj(h) y) / sigma2`.
pub fn demap_llr(received: &Received, noise_variance: f64) -> Result<Vec<f64>> {
    if !noise_variance.is_finite() || noise_variance <= 0.0 {
        return Err(Error::Config(format!(
            "noise variance must be positive, got {noise_variance}"
        )));
    }
    let scale = 2.0 / noise_variance;
    Ok(received
        .symbols
        .iter()
        .zip(&received.gains)
        .flat_map(|(&y, &h)| {
            let z = h.conj() * y;
            [scale * z.re, scale * z.im]
        })
        .collect())
}

/// Hard decisions from LLRs (non-positive LLR decides 1).
pub fn hard_decisions(llrs: &[f64]) -> Vec<u8> {
    llrs.iter().map(|&l| u8::from(l <= 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mapping_points() {
        let s = modulate_qpsk(&[0, 0, 1, 1, 0, 1]);
        let a = FRAC_1_SQRT_2;
        assert_eq!(
            s,
            vec![
                Complex64::new(a, a),
                Complex64::new(-a, -a),
                Complex64::new(a, -a)
            ]
        );
        assert_eq!(modulate_qpsk(&[0; 96]).len(), 48);
    }

    #[test]
    fn unit_average_energy() {
        let bits: Vec<u8> = (0..1000).map(|i| ((i * 31 + 7) % 3 % 2) as u8).collect();
        let s = modulate_qpsk(&bits);
        let e: f64 = s.iter().map(|x| x.norm_sqr()).sum::<f64>() / s.len() as f64;
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noise_variance_formula() {
        let cfg = ChannelConfig::new(ChannelModel::Awgn, 3.0, 0.5).unwrap();
        assert!((cfg.noise_variance() - 1.0 / (2.0 * 10f64.powf(0.3))).abs() < 1e-15);
        assert!((cfg.noise_variance() - 0.2506).abs() < 1e-4);
    }

    #[test]
    fn noiseless_is_exact() {
        let cfg = ChannelConfig::new(ChannelModel::Awgn, f64::INFINITY, 0.5).unwrap();
        let x = modulate_qpsk(&[0, 1, 1, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(transmit(&x, &cfg, &mut rng).symbols, x);
    }

    #[test]
    fn seeded_noise_repeats() {
        let cfg = ChannelConfig::new(ChannelModel::FlatRayleigh, 2.0, 0.5).unwrap();
        let x = modulate_qpsk(&[0; 64]);
        let a = transmit(&x, &cfg, &mut ChaCha8Rng::seed_from_u64(9));
        let b = transmit(&x, &cfg, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.symbols, b.symbols);
        assert_eq!(a.gains, b.gains);
    }

    #[test]
    fn demap_formula_and_hard_decisions() {
        let a = FRAC_1_SQRT_2;
        let rx = Received {
            symbols: vec![Complex64::new(a, -a)],
            gains: vec![Complex64::new(1.0, 0.0)],
        };
        let llr = demap_llr(&rx, 0.5).unwrap();
        assert!((llr[0] - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((llr[1] + 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(hard_decisions(&llr), vec![0, 1]);
        assert!(matches!(demap_llr(&rx, 0.0), Err(Error::Config(_))));
        assert!(matches!(demap_llr(&rx, -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn fading_with_csi_recovers_bits_noiselessly() {
        let bits: Vec<u8> = (0..200).map(|i| (i % 3 == 0) as u8).collect();
        let cfg = ChannelConfig::new(ChannelModel::FlatRayleigh, f64::INFINITY, 0.5).unwrap();
        let rx = transmit(
            &modulate_qpsk(&bits),
            &cfg,
            &mut ChaCha8Rng::seed_from_u64(3),
        );
        let llr = demap_llr(&rx, cfg.demap_variance()).unwrap();
        assert_eq!(hard_decisions(&llr), bits);
    }

    #[test]
    fn hard_ber_falls_with_snr() {
        let bits: Vec<u8> = (0..20_000).map(|i| ((i * 7919) % 11 % 2) as u8).collect();
        let x = modulate_qpsk(&bits);
        let ber = |snr: f64| {
            let cfg = ChannelConfig::new(ChannelModel::Awgn, snr, 0.5).unwrap();
            let rx = transmit(&x, &cfg, &mut ChaCha8Rng::seed_from_u64(17));
            let llr = demap_llr(&rx, cfg.demap_variance()).unwrap();
            hard_decisions(&llr)
                .iter()
                .zip(&bits)
                .filter(|(a, b)| a != b)
                .count()
        };
        let counts: Vec<usize> = [-2.0, 0.0, 2.0, 4.0].iter().map(|&s| ber(s)).collect();
        assert!(counts.windows(2).all(|w| w[0] > w[1]), "{counts:?}");
    }

    #[test]
    fn parse_model() {
        assert_eq!("AWGN".parse::<ChannelModel>().unwrap(), ChannelModel::Awgn);
        assert_eq!(
            "flat_rayleigh".parse::<ChannelModel>().unwrap(),
            ChannelModel::FlatRayleigh
        );
        assert!("ofdm".parse::<ChannelModel>().is_err());
        assert!(ChannelConfig::new(ChannelModel::Awgn, f64::NAN, 0.5).is_err());
    }
}
