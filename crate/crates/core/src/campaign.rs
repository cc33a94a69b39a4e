//! Signaling campaigns: random-symbol Monte-Carlo averages and
//! deterministic unimodular runs across a set of waveforms.
//!
//! Random campaigns draw realization r from the ChaCha stream
//! (master_seed, r), so results are bit-identical for a given configuration
//! and seed regardless of how many workers participate: realizations are
//! evaluated in fixed-size chunks in parallel, then folded into the
//! accumulator in realization order.
//!
//! Averaging operates on peak-normalized magnitude cuts by default (the
//! complex mean would cancel off-peak under random symbols); a power-mean
//! variant is available and the choice is echoed in the result provenance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::{ambiguity_cuts, ambiguity_surface, AfConfig, AfCut, AfSurface};
use crate::error::{Error, Result};
use crate::metrics::{analyze_cut, CutMetrics};
use crate::permutation::random_permutation;
use crate::symbols::{qam_constellation, realization_rng, SymbolBlock};
use crate::waveform::{modulate, WaveformSpec};

/// Realizations evaluated per parallel batch; fixed so accumulation order
/// does not depend on the worker count.
const CHUNK: usize = 64;

/// Which symbol blocks a campaign transmits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SignalingMode {
    /// One deterministic all-ones pass per waveform.
    Unimodular,
    /// `realizations` independent draws of normalized QAM symbols.
    Random {
        qam_order: usize,
        realizations: usize,
        master_seed: u64,
    },
}

/// What is averaged across realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AveragingOperand {
    /// Mean of |A| per grid point.
    Magnitude,
    /// Root of the mean of |A|^2 per grid point.
    Power,
}

/// Full description of one campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// Block length N.
    pub block_len: usize,
    pub waveforms: Vec<WaveformSpec>,
    pub mode: SignalingMode,
    pub af: AfConfig,
    /// Draw a fresh chirp permutation per realization (CP-AFDM, random mode).
    pub randomize_permutation: bool,
    /// Sample period in seconds, used only for physical-unit reporting.
    pub sample_period: Option<f64>,
    pub averaging: AveragingOperand,
    /// Retain the full surface per waveform (single-realization runs only).
    pub keep_surface: bool,
}

impl CampaignConfig {
    /// The built-in benchmark preset: N = 144, 12 x 12 OTFS grid,
    /// O_tau = O_nu = 4, L_h = 4, Hann window, unimodular signaling,
    /// chirp rates c1 = 5/(2N), c2 = 1/(2N), seed-0 chirp permutation.
    pub fn table1_preset() -> Self {
        let n = 144usize;
        let c1 = 5.0 / (2.0 * n as f64);
        let c2 = 1.0 / (2.0 * n as f64);
        Self {
            block_len: n,
            waveforms: vec![
                WaveformSpec::Ofdm,
                WaveformSpec::Otfs {
                    delay_bins: 12,
                    doppler_bins: 12,
                },
                WaveformSpec::Afdm { c1, c2 },
                WaveformSpec::CpAfdm {
                    c1,
                    c2,
                    permutation: crate::permutation::PermutationSpec::Seeded(0),
                },
            ],
            mode: SignalingMode::Unimodular,
            af: AfConfig::default(),
            randomize_permutation: false,
            sample_period: None,
            averaging: AveragingOperand::Magnitude,
            keep_surface: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_len < 2 {
            return Err(Error::Config(format!(
                "block length N = {} must be >= 2",
                self.block_len
            )));
        }
        self.af.validate()?;
        for spec in &self.waveforms {
            spec.validate(self.block_len)?;
        }
        if let Some(ts) = self.sample_period {
            if ts.is_nan() || ts <= 0.0 {
                return Err(Error::Config(format!(
                    "sample period T_s = {ts} must be positive"
                )));
            }
        }
        if let SignalingMode::Random {
            qam_order,
            realizations,
            ..
        } = self.mode
        {
            qam_constellation(qam_order)?;
            if realizations < 1 {
                return Err(Error::Config("realizations R must be >= 1".into()));
            }
            if self.keep_surface && realizations > 1 {
                return Err(Error::SurfaceRetention { realizations });
            }
        }
        Ok(())
    }
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self::table1_preset()
    }
}

/// Cuts, metrics, and optional surface for one waveform.
#[derive(Debug, Clone, Serialize)]
pub struct WaveformRun {
    pub label: String,
    pub spec: WaveformSpec,
    pub delay_cut: AfCut,
    pub doppler_cut: AfCut,
    pub delay_metrics: CutMetrics,
    pub doppler_metrics: CutMetrics,
    #[serde(skip_serializing)]
    pub surface: Option<AfSurface>,
}

/// Campaign output: the configuration echo is the provenance record (it
/// contains every seed), plus one entry per waveform.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub runs: Vec<WaveformRun>,
}

/// Run the configured campaign over every waveform.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let runs = cfg
        .waveforms
        .iter()
        .map(|spec| run_waveform(cfg, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(CampaignResult {
        config: cfg.clone(),
        runs,
    })
}

fn run_waveform(cfg: &CampaignConfig, spec: &WaveformSpec) -> Result<WaveformRun> {
    let (delay_cut, doppler_cut, surface) = match cfg.mode {
        SignalingMode::Unimodular => {
            let block = SymbolBlock::unimodular(cfg.block_len)?;
            let signal = modulate(spec, &block)?;
            let (d, v) = ambiguity_cuts(&signal, &cfg.af)?;
            let surface = if cfg.keep_surface {
                Some(ambiguity_surface(&signal, &cfg.af)?)
            } else {
                None
            };
            (d, v, surface)
        }
        SignalingMode::Random {
            qam_order,
            realizations,
            master_seed,
        } => run_random(cfg, spec, qam_order, realizations, master_seed)?,
    };
    Ok(WaveformRun {
        label: spec.label().to_string(),
        spec: spec.clone(),
        delay_metrics: analyze_cut(&delay_cut),
        doppler_metrics: analyze_cut(&doppler_cut),
        delay_cut,
        doppler_cut,
        surface,
    })
}

/// One realization: symbols first, then (when enabled) the fresh chirp
/// permutation, both from the (master_seed, r) stream.
fn realize(
    cfg: &CampaignConfig,
    spec: &WaveformSpec,
    qam_order: usize,
    master_seed: u64,
    r: u64,
) -> Result<(AfCut, AfCut)> {
    let mut rng = realization_rng(master_seed, r);
    let block = SymbolBlock::draw_qam(&mut rng, cfg.block_len, qam_order)?;
    let effective;
    let spec = if cfg.randomize_permutation {
        if let WaveformSpec::CpAfdm { c1, c2, .. } = spec {
            let perm = random_permutation(&mut rng, cfg.block_len);
            effective = WaveformSpec::CpAfdm {
                c1: *c1,
                c2: *c2,
                permutation: crate::permutation::PermutationSpec::Explicit(perm),
            };
            &effective
        } else {
            spec
        }
    } else {
        spec
    };
    let signal = modulate(spec, &block)?;
    ambiguity_cuts(&signal, &cfg.af)
}

fn run_random(
    cfg: &CampaignConfig,
    spec: &WaveformSpec,
    qam_order: usize,
    realizations: usize,
    master_seed: u64,
) -> Result<(AfCut, AfCut, Option<AfSurface>)> {
    let mut delay_acc: Vec<f64> = Vec::new();
    let mut doppler_acc: Vec<f64> = Vec::new();
    let mut delay_axis: Vec<f64> = Vec::new();
    let mut doppler_axis: Vec<f64> = Vec::new();
    let square = matches!(cfg.averaging, AveragingOperand::Power);

    let mut start = 0usize;
    while start < realizations {
        let end = (start + CHUNK).min(realizations);
        let chunk: Vec<(AfCut, AfCut)> = (start..end)
            .into_par_iter()
            .map(|r| realize(cfg, spec, qam_order, master_seed, r as u64))
            .collect::<Result<Vec<_>>>()?;
        for (delay, doppler) in chunk {
            if delay_acc.is_empty() {
                delay_acc = vec![0.0; delay.values.len()];
                doppler_acc = vec![0.0; doppler.values.len()];
                delay_axis = delay.axis.clone();
                doppler_axis = doppler.axis.clone();
            }
            accumulate(&mut delay_acc, &delay.values, square);
            accumulate(&mut doppler_acc, &doppler.values, square);
        }
        start = end;
    }

    let finish = |acc: Vec<f64>, axis: Vec<f64>, kind| -> AfCut {
        let mut values: Vec<f64> = acc
            .into_iter()
            .map(|v| {
                let mean = v / realizations as f64;
                if square {
                    mean.sqrt()
                } else {
                    mean
                }
            })
            .collect();
        let peak = values.iter().cloned().fold(0.0f64, f64::max);
        for v in &mut values {
            *v /= peak;
        }
        AfCut { values, axis, kind }
    };
    let delay_cut = finish(
        delay_acc,
        delay_axis,
        crate::ambiguity::CutKind::ZeroDoppler,
    );
    let doppler_cut = finish(
        doppler_acc,
        doppler_axis,
        crate::ambiguity::CutKind::ZeroDelay,
    );

    // Full surface only for single-realization runs (validated above).
    let surface = if cfg.keep_surface {
        let mut rng = realization_rng(master_seed, 0);
        let block = SymbolBlock::draw_qam(&mut rng, cfg.block_len, qam_order)?;
        let signal = modulate(spec, &block)?;
        Some(ambiguity_surface(&signal, &cfg.af)?)
    } else {
        None
    };
    Ok((delay_cut, doppler_cut, surface))
}

fn accumulate(acc: &mut [f64], values: &[f64], square: bool) {
    for (a, v) in acc.iter_mut().zip(values) {
        *a += if square { v * v } else { *v };
    }
}

/// Elementwise arithmetic mean of magnitude cuts, re-normalized to unit peak.
pub fn average_cuts(cuts: &[AfCut]) -> Result<AfCut> {
    let first = cuts
        .first()
        .ok_or_else(|| Error::Config("cannot average an empty cut list".into()))?;
    for cut in &cuts[1..] {
        if cut.axis != first.axis || cut.kind != first.kind {
            return Err(Error::AxisMismatch);
        }
    }
    let mut values = vec![0.0; first.values.len()];
    for cut in cuts {
        for (acc, v) in values.iter_mut().zip(&cut.values) {
            *acc += v;
        }
    }
    for v in &mut values {
        *v /= cuts.len() as f64;
    }
    let peak = values.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    for v in &mut values {
        *v /= peak;
    }
    Ok(AfCut {
        values,
        axis: first.axis.clone(),
        kind: first.kind,
    })
}
