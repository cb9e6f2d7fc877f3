//! Decoding of tailbiting convolutional codes.
//!
//! The crate is organised bottom-up:
//!
//! * [`trellis`]: code definitions and their state-transition structure.
//! * [`encoder`]: tailbiting encoding and circular rotations.
//! * [`channel`]: QPSK mapping, AWGN / flat-Rayleigh channels and LLR demapping.
//! * [`viterbi`]: the add-compare-select kernel shared by every decoder,
//!   with optional recording of survivor metric differences.
//! * [`reliability`]: per-state likelihoods along the survivor path and
//!   anchor-state selection.
//! * [`tsva`]: the two-step decoder (reliability-anchored constrained Viterbi).
//! * [`baselines`]: ML, exhaustive and fixed-length circular Viterbi decoders.
//! * [`sim`]: Monte Carlo BLER campaigns, window sweeps and CSV output.

pub mod baselines;
pub mod channel;
pub mod decode;
pub mod encoder;
pub mod error;
pub mod reliability;
pub mod sim;
pub mod trellis;
pub mod tsva;
pub mod viterbi;

pub use decode::{DecodeResult, Decoder};
pub use error::{Error, Result};
pub use trellis::{CodeSpec, Trellis};
