//! The four unitary modulators: OFDM, OTFS, AFDM, and chirp-permuted AFDM.
//!
//! All of them are built on the normalized N-point DFT with forward kernel
//! e^{-j2*pi*i*n/N} and a 1/sqrt(N) factor on both directions, so every
//! modulator maps a symbol block to a time signal of identical energy. The
//! fast paths below use FFTs rescaled to that convention; dense-matrix
//! equivalents exist only in the test suites as independent oracles.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::permutation::{resolve_permutation, PermutationSpec};
use crate::symbols::SymbolBlock;

/// One of the four multicarrier waveforms with its parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum WaveformSpec {
    /// Symbols on orthogonal subcarriers via the normalized inverse DFT.
    Ofdm,
    /// Symbols on a delay-Doppler grid with `delay_bins` x `doppler_bins`
    /// cells (the K x L grid, K*L = N), rectangular pulse shaping.
    Otfs {
        delay_bins: usize,
        doppler_bins: usize,
    },
    /// Chirp subcarriers via the inverse discrete affine Fourier transform
    /// with per-sample-squared phase rates `c1` and `c2`.
    Afdm { c1: f64, c2: f64 },
    /// AFDM with the second chirp sequence permuted before modulation.
    CpAfdm {
        c1: f64,
        c2: f64,
        permutation: PermutationSpec,
    },
}

impl WaveformSpec {
    /// Display label, matching the usual waveform names.
    pub fn label(&self) -> &'static str {
        match self {
            WaveformSpec::Ofdm => "OFDM",
            WaveformSpec::Otfs { .. } => "OTFS",
            WaveformSpec::Afdm { .. } => "AFDM",
            WaveformSpec::CpAfdm { .. } => "CP-AFDM",
        }
    }

    /// Check this waveform description against a block length.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            WaveformSpec::Ofdm | WaveformSpec::Afdm { .. } => Ok(()),
            WaveformSpec::Otfs {
                delay_bins,
                doppler_bins,
            } => {
                if *delay_bins == 0 || *doppler_bins == 0 || delay_bins * doppler_bins != n {
                    return Err(Error::Config(format!(
                        "OTFS grid K*L = {}*{} does not equal N = {n}",
                        delay_bins, doppler_bins
                    )));
                }
                Ok(())
            }
            WaveformSpec::CpAfdm { permutation, .. } => {
                resolve_permutation(permutation, n).map(|_| ())
            }
        }
    }
}

/// A length-N discrete-time baseband transmit vector, unit sample spacing.
///
/// The physical sample period enters only when axes are reported; see
/// [`crate::ambiguity::delay_to_seconds`] and
/// [`crate::ambiguity::doppler_to_hertz`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    pub samples: Vec<Complex64>,
}

impl TimeSignal {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sum of |s[n]|^2 over the block.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// The chirp sequence entry n = exp(-j*2*pi*c*n^2); all entries unit modulus.
///
/// The phase is reduced modulo one cycle before scaling by 2*pi to keep the
/// argument of sin/cos small for large n.
pub fn chirp_sequence(rate: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let cycles = -(rate * (i as f64) * (i as f64));
            Complex64::from_polar(1.0, TAU * cycles.rem_euclid(1.0))
        })
        .collect()
}

/// Apply the modulator described by `spec` to a symbol block.
pub fn modulate(spec: &WaveformSpec, block: &SymbolBlock) -> Result<TimeSignal> {
    let n = block.len();
    if n < 2 {
        return Err(Error::Config(format!("block length N = {n} must be >= 2")));
    }
    spec.validate(n)?;
    let samples = match spec {
        WaveformSpec::Ofdm => idft_normalized(block.values.clone()),
        WaveformSpec::Otfs {
            delay_bins,
            doppler_bins,
        } => otfs_modulate(&block.values, *delay_bins, *doppler_bins),
        WaveformSpec::Afdm { c1, c2 } => {
            let second = chirp_sequence(*c2, n);
            afdm_core(&block.values, *c1, &second)
        }
        WaveformSpec::CpAfdm {
            c1,
            c2,
            permutation,
        } => {
            let perm = resolve_permutation(permutation, n)?;
            let base = chirp_sequence(*c2, n);
            let permuted: Vec<Complex64> = perm.iter().map(|&idx| base[idx]).collect();
            afdm_core(&block.values, *c1, &permuted)
        }
    };
    Ok(TimeSignal { samples })
}

/// Normalized inverse DFT: kernel e^{+j*2*pi*i*n/N} with 1/sqrt(N).
fn idft_normalized(mut data: Vec<Complex64>) -> Vec<Complex64> {
    let n = data.len();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    fft.process(&mut data);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// s = (F_L^H kron I_K) x: a normalized length-L inverse DFT across each of
/// the K interleaved sample groups.
fn otfs_modulate(values: &[Complex64], delay_bins: usize, doppler_bins: usize) -> Vec<Complex64> {
    let (k_bins, l_bins) = (delay_bins, doppler_bins);
    let n = values.len();
    let mut out = vec![Complex64::default(); n];
    let fft = FftPlanner::new().plan_fft_inverse(l_bins);
    let scale = 1.0 / (l_bins as f64).sqrt();
    let mut lane = vec![Complex64::default(); l_bins];
    for p in 0..k_bins {
        for (q, slot) in lane.iter_mut().enumerate() {
            *slot = values[q * k_bins + p];
        }
        fft.process(&mut lane);
        for (q, value) in lane.iter().enumerate() {
            out[q * k_bins + p] = *value * scale;
        }
    }
    out
}

/// s = Lambda_c1^H F^H Lambda_2^H x with an arbitrary second chirp diagonal.
fn afdm_core(values: &[Complex64], c1: f64, second_chirp: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let pre: Vec<Complex64> = values
        .iter()
        .zip(second_chirp)
        .map(|(x, l)| x * l.conj())
        .collect();
    let mid = idft_normalized(pre);
    let first = chirp_sequence(c1, n);
    mid.iter()
        .zip(&first)
        .map(|(z, l)| z * l.conj())
        .collect()
}
