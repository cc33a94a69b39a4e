//! High-resolution discrete ambiguity function on a normalized
//! delay-Doppler grid, with zero-Doppler and zero-delay cut extraction.
//!
//! For a block s[0..N), the discrete AF is
//!
//!   A(tau, nu) = sum_n s[n] * conj(s(n - tau)) * e^{-j 2 pi nu n},
//!
//! with aperiodic (zero-extended) lags. Integer delays index the block
//! directly; fractional delays evaluate the block through the windowed-sinc
//! kernel of [`crate::interp`], computed on an index range widened by the
//! kernel reach so lags near the block edges keep their full response. For
//! each delay row the Doppler sweep is a zero-padded FFT of the lag product,
//! which reproduces the direct sum to rounding error at a fraction of the
//! cost.
//!
//! The magnitude of the true AF satisfies |A(-tau, -nu)| = |A(tau, nu)|
//! exactly, and at integer delays the discrete sum inherits that identity.
//! At fractional delays a one-sided interpolation breaks it at the
//! interpolation-error level, so the surface is evaluated on the tau >= 0
//! half-grid and reflected, which keeps the stored magnitude exactly
//! symmetric and halves the work.
//!
//! Axes are dimensionless: delay in fractions of the block length
//! (tau_norm = tau_samples / N), Doppler in cycles per sample. Physical
//! units enter only through [`delay_to_seconds`] and [`doppler_to_hertz`].

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interp::ExtendedShift;
use crate::waveform::TimeSignal;
use crate::window::WindowKind;

/// Grid and interpolation parameters for an AF evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AfConfig {
    /// Delay oversampling factor: fractional-delay steps per sample.
    pub delay_oversampling: usize,
    /// Doppler oversampling factor: the Doppler step is 1/(O_nu * N).
    pub doppler_oversampling: usize,
    /// Interpolation kernel half-width in samples.
    pub interp_half_width: usize,
    /// Taper on the interpolation kernel.
    pub window: WindowKind,
    /// Doppler half-range in cycles/sample, at most the Nyquist 0.5.
    pub doppler_half_range: f64,
}

impl Default for AfConfig {
    fn default() -> Self {
        Self {
            delay_oversampling: 4,
            doppler_oversampling: 4,
            interp_half_width: 4,
            window: WindowKind::Hann,
            doppler_half_range: 0.5,
        }
    }
}

impl AfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delay_oversampling < 1 {
            return Err(Error::Config("delay oversampling O_tau must be >= 1".into()));
        }
        if self.doppler_oversampling < 1 {
            return Err(Error::Config("Doppler oversampling O_nu must be >= 1".into()));
        }
        if self.interp_half_width < 1 {
            return Err(Error::Config("interpolation half-width L_h must be >= 1".into()));
        }
        if !(self.doppler_half_range > 0.0 && self.doppler_half_range <= 0.5) {
            return Err(Error::Config(format!(
                "nu_max = {} must lie in (0, 0.5]",
                self.doppler_half_range
            )));
        }
        Ok(())
    }
}

/// Which 1D slice of the surface a cut is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CutKind {
    ZeroDoppler,
    ZeroDelay,
}

/// A peak-normalized 1D AF slice on a uniform normalized axis.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AfCut {
    pub values: Vec<f64>,
    pub axis: Vec<f64>,
    pub kind: CutKind,
}

impl AfCut {
    /// Index of the axis origin (the grid always contains 0).
    pub fn origin_index(&self) -> usize {
        self.axis
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

/// Peak-normalized AF magnitude on the full delay-Doppler grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AfSurface {
    /// Row-major magnitudes, `n_delay` rows by `n_doppler` columns.
    mag: Vec<f64>,
    /// Normalized delays, (-(N-1)..(N-1))/N in steps of 1/(N*O_tau).
    pub delay_axis: Vec<f64>,
    /// Normalized Doppler, [-nu_max, nu_max] in steps of 1/(O_nu*N).
    pub doppler_axis: Vec<f64>,
    /// Surface maximum before normalization (the signal energy at (0,0)).
    pub peak_value_raw: f64,
}

impl AfSurface {
    /// Assemble a surface from raw parts (row-major magnitudes).
    pub fn from_parts(
        mag: Vec<f64>,
        delay_axis: Vec<f64>,
        doppler_axis: Vec<f64>,
        peak_value_raw: f64,
    ) -> Result<Self> {
        if mag.len() != delay_axis.len() * doppler_axis.len() {
            return Err(Error::Dimension {
                what: "surface magnitude grid",
                expected: delay_axis.len() * doppler_axis.len(),
                got: mag.len(),
            });
        }
        Ok(Self {
            mag,
            delay_axis,
            doppler_axis,
            peak_value_raw,
        })
    }

    pub fn n_delay(&self) -> usize {
        self.delay_axis.len()
    }

    pub fn n_doppler(&self) -> usize {
        self.doppler_axis.len()
    }

    /// Magnitude at (delay row, Doppler column).
    pub fn value(&self, delay_idx: usize, doppler_idx: usize) -> f64 {
        self.mag[delay_idx * self.n_doppler() + doppler_idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.mag
    }

    /// Row index of tau = 0.
    pub fn delay_origin(&self) -> usize {
        self.n_delay() / 2
    }

    /// Column index of nu = 0.
    pub fn doppler_origin(&self) -> usize {
        self.n_doppler() / 2
    }
}

/// Geometry shared by the surface and the direct cut paths.
struct Grid {
    n: usize,
    delay_steps: usize,
    fft_len: usize,
    doppler_side: usize,
}

impl Grid {
    fn new(n: usize, cfg: &AfConfig) -> Self {
        let fft_len = cfg.doppler_oversampling * n;
        let side = ((cfg.doppler_half_range * fft_len as f64) + 1e-9).floor() as usize;
        Self {
            n,
            delay_steps: (n - 1) * cfg.delay_oversampling,
            fft_len,
            doppler_side: side.min(fft_len / 2),
        }
    }

    fn n_doppler(&self) -> usize {
        2 * self.doppler_side + 1
    }

    fn delay_axis(&self, delay_oversampling: usize) -> Vec<f64> {
        let scale = (delay_oversampling * self.n) as f64;
        (-(self.delay_steps as i64)..=self.delay_steps as i64)
            .map(|g| g as f64 / scale)
            .collect()
    }

    fn doppler_axis(&self) -> Vec<f64> {
        let side = self.doppler_side as i64;
        (-side..=side)
            .map(|k| k as f64 / self.fft_len as f64)
            .collect()
    }
}

/// Per-phase shifted copies of the signal, one per fractional delay step.
fn phase_shifts(signal: &TimeSignal, cfg: &AfConfig) -> Vec<ExtendedShift> {
    let margin = cfg.interp_half_width + 1;
    (0..cfg.delay_oversampling)
        .map(|j| {
            ExtendedShift::new(
                &signal.samples,
                j as f64 / cfg.delay_oversampling as f64,
                cfg.interp_half_width,
                cfg.window,
                margin,
            )
        })
        .collect()
}

/// Lag product p[n] = s[n] * conj(s_shifted[n - lag]) for one delay row.
fn lag_product(
    samples: &[Complex64],
    shifted: &ExtendedShift,
    lag: i64,
    out: &mut [Complex64],
) {
    for (n, (s, slot)) in samples.iter().zip(out.iter_mut()).enumerate() {
        *slot = s * shifted.at(n as i64 - lag).conj();
    }
}

fn validate_signal(signal: &TimeSignal, cfg: &AfConfig) -> Result<()> {
    cfg.validate()?;
    if signal.len() < 2 {
        return Err(Error::Config(format!(
            "block length N = {} must be >= 2",
            signal.len()
        )));
    }
    if signal.energy() <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(())
}

/// Compute the interpolated, peak-normalized AF magnitude surface.
pub fn ambiguity_surface(signal: &TimeSignal, cfg: &AfConfig) -> Result<AfSurface> {
    validate_signal(signal, cfg)?;
    let grid = Grid::new(signal.len(), cfg);
    let shifts = phase_shifts(signal, cfg);
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(grid.fft_len);

    // Rows for tau >= 0; tau < 0 comes from the reflection identity.
    let rows: Vec<Vec<f64>> = (0..=grid.delay_steps)
        .into_par_iter()
        .map(|g| {
            let lag = (g / cfg.delay_oversampling) as i64;
            let phase = g % cfg.delay_oversampling;
            let mut buf = vec![Complex64::default(); grid.fft_len];
            lag_product(&signal.samples, &shifts[phase], lag, &mut buf[..grid.n]);
            fft.process(&mut buf);
            doppler_bins(&buf, grid.doppler_side)
        })
        .collect();

    let n_doppler = grid.n_doppler();
    let n_delay = 2 * grid.delay_steps + 1;
    let center = grid.delay_steps;
    let mut mag = vec![0.0; n_delay * n_doppler];
    for (g, row) in rows.iter().enumerate() {
        mag[(center + g) * n_doppler..(center + g + 1) * n_doppler].copy_from_slice(row);
        if g > 0 {
            let dst = (center - g) * n_doppler;
            for (d, &v) in row.iter().rev().enumerate() {
                mag[dst + d] = v;
            }
        }
    }

    let peak = mag.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    for v in &mut mag {
        *v /= peak;
    }

    Ok(AfSurface {
        mag,
        delay_axis: grid.delay_axis(cfg.delay_oversampling),
        doppler_axis: grid.doppler_axis(),
        peak_value_raw: peak,
    })
}

/// Magnitudes at Doppler bins -side..=side of a length-L FFT output.
fn doppler_bins(spectrum: &[Complex64], side: usize) -> Vec<f64> {
    let len = spectrum.len();
    (-(side as i64)..=side as i64)
        .map(|k| spectrum[(k.rem_euclid(len as i64)) as usize].norm())
        .collect()
}

/// Both 1D cuts computed directly, without materializing the 2D surface.
///
/// The zero-Doppler cut needs only the nu = 0 value of each delay row and the
/// zero-delay cut a single FFT, so this is the path Monte-Carlo campaigns
/// take. Values agree with cuts extracted from [`ambiguity_surface`] to
/// rounding error.
pub fn ambiguity_cuts(signal: &TimeSignal, cfg: &AfConfig) -> Result<(AfCut, AfCut)> {
    validate_signal(signal, cfg)?;
    let grid = Grid::new(signal.len(), cfg);
    let shifts = phase_shifts(signal, cfg);

    // Zero-Doppler: direct lag-product sums over tau >= 0, reflected.
    let half: Vec<f64> = (0..=grid.delay_steps)
        .map(|g| {
            let lag = (g / cfg.delay_oversampling) as i64;
            let shifted = &shifts[g % cfg.delay_oversampling];
            let acc: Complex64 = signal
                .samples
                .iter()
                .enumerate()
                .map(|(n, s)| s * shifted.at(n as i64 - lag).conj())
                .sum();
            acc.norm()
        })
        .collect();
    let mut delay_values = Vec::with_capacity(2 * grid.delay_steps + 1);
    delay_values.extend(half.iter().skip(1).rev());
    delay_values.extend(half.iter());
    let delay_cut = normalized_cut(delay_values, grid.delay_axis(cfg.delay_oversampling), CutKind::ZeroDoppler)?;

    // Zero-delay: FFT of the instantaneous power.
    let mut buf = vec![Complex64::default(); grid.fft_len];
    for (slot, s) in buf.iter_mut().zip(&signal.samples) {
        *slot = Complex64::new(s.norm_sqr(), 0.0);
    }
    FftPlanner::new()
        .plan_fft_forward(grid.fft_len)
        .process(&mut buf);
    let doppler_values = doppler_bins(&buf, grid.doppler_side);
    let doppler_cut = normalized_cut(doppler_values, grid.doppler_axis(), CutKind::ZeroDelay)?;

    Ok((delay_cut, doppler_cut))
}

fn normalized_cut(mut values: Vec<f64>, axis: Vec<f64>, kind: CutKind) -> Result<AfCut> {
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    for v in &mut values {
        *v /= peak;
    }
    Ok(AfCut { values, axis, kind })
}

/// The nu = 0 column of a surface, re-normalized to unit peak.
pub fn zero_doppler_cut(surface: &AfSurface) -> AfCut {
    let col = surface.doppler_origin();
    let values = (0..surface.n_delay())
        .map(|r| surface.value(r, col))
        .collect();
    normalized_cut(values, surface.delay_axis.clone(), CutKind::ZeroDoppler)
        .expect("surface is peak-normalized")
}

/// The tau = 0 row of a surface, re-normalized to unit peak.
pub fn zero_delay_cut(surface: &AfSurface) -> AfCut {
    let row = surface.delay_origin();
    let values = (0..surface.n_doppler())
        .map(|c| surface.value(row, c))
        .collect();
    normalized_cut(values, surface.doppler_axis.clone(), CutKind::ZeroDelay)
        .expect("surface is peak-normalized")
}

/// Normalized delay to seconds: tau_phys = tau_norm * N * T_s.
pub fn delay_to_seconds(tau_norm: f64, block_len: usize, sample_period: f64) -> Result<f64> {
    check_sample_period(sample_period)?;
    Ok(tau_norm * block_len as f64 * sample_period)
}

/// Normalized Doppler (cycles/sample) to hertz: nu_phys = nu_norm / T_s.
pub fn doppler_to_hertz(nu_norm: f64, sample_period: f64) -> Result<f64> {
    check_sample_period(sample_period)?;
    Ok(nu_norm / sample_period)
}

fn check_sample_period(sample_period: f64) -> Result<()> {
    if sample_period.is_nan() || sample_period <= 0.0 {
        return Err(Error::Config(format!(
            "sample period T_s = {sample_period} must be positive"
        )));
    }
    Ok(())
}
