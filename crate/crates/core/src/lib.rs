//! Delay-Doppler ambiguity analysis for multicarrier waveforms.
//!
//! The crate generates the discrete-time transmit signals of four
//! multicarrier waveforms (OFDM, OTFS, AFDM, and chirp-permuted AFDM),
//! evaluates their ambiguity functions on a dense normalized delay-Doppler
//! grid with windowed-sinc fractional-delay interpolation and Doppler
//! oversampling, and extracts standardized sensing metrics (3 dB mainlobe
//! width, PSLR, ISLR) from the zero-Doppler and zero-delay cuts. A campaign
//! layer orchestrates random-symbol Monte-Carlo averages and deterministic
//! unimodular runs across waveforms.
//!
//! All axes are dimensionless (delay in fractions of the block length,
//! Doppler in cycles per sample); results translate to physical units via a
//! sample period supplied only at reporting time.

pub mod ambiguity;
pub mod campaign;
pub mod error;
pub mod interp;
pub mod metrics;
pub mod permutation;
pub mod symbols;
pub mod waveform;
pub mod window;

pub use error::{Error, Result};
