//! Flag and file configuration merged into a campaign description.
//!
//! Precedence: built-in defaults (or a named preset), then the TOML config
//! file, then command-line flags. Unknown file keys are rejected with the
//! offending key named.

use std::path::PathBuf;

use afkit_core::ambiguity::AfConfig;
use afkit_core::campaign::{AveragingOperand, CampaignConfig, SignalingMode};
use afkit_core::permutation::PermutationSpec;
use afkit_core::waveform::WaveformSpec;
use afkit_core::window::WindowKind;
use serde::Deserialize;

use crate::CliError;

/// Flags shared by the `run` and `af` subcommands.
#[derive(clap::Args, Debug, Clone, Default)]
pub struct CampaignArgs {
    /// TOML configuration file; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Named preset. `paper-table1` selects the N = 144 benchmark
    /// (K = L = 12, O_tau = O_nu = 4, L_h = 4, unimodular symbols).
    #[arg(long)]
    pub preset: Option<String>,

    /// Waveform to include (repeatable): ofdm | otfs | afdm | cp-afdm.
    /// Defaults to all four.
    #[arg(long = "waveform")]
    pub waveform: Vec<String>,

    /// Block length N.
    #[arg(long = "N")]
    pub n: Option<usize>,

    /// OTFS delay bins K (K*L must equal N).
    #[arg(long = "K")]
    pub k: Option<usize>,

    /// OTFS Doppler bins L (K*L must equal N).
    #[arg(long = "L")]
    pub l: Option<usize>,

    /// First chirp rate; default 5/(2N).
    #[arg(long)]
    pub c1: Option<f64>,

    /// Second chirp rate; default 1/(2N).
    #[arg(long)]
    pub c2: Option<f64>,

    /// Seed of the CP-AFDM chirp permutation.
    #[arg(long = "perm-seed")]
    pub perm_seed: Option<u64>,

    /// Signaling mode: random | unimodular.
    #[arg(long)]
    pub mode: Option<String>,

    /// QAM order M for random mode (4, 16, 64).
    #[arg(long = "M")]
    pub m: Option<usize>,

    /// Realizations R for random mode.
    #[arg(long = "R")]
    pub r: Option<usize>,

    /// Master seed for random mode.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Delay oversampling factor O_tau.
    #[arg(long)]
    pub otau: Option<usize>,

    /// Doppler oversampling factor O_nu.
    #[arg(long)]
    pub onu: Option<usize>,

    /// Interpolation half-width L_h.
    #[arg(long)]
    pub lh: Option<usize>,

    /// Interpolation window: hann | rectangular | kaiser:<beta>.
    #[arg(long)]
    pub window: Option<String>,

    /// Doppler half-range in cycles/sample (0, 0.5].
    #[arg(long)]
    pub numax: Option<f64>,

    /// Sample period in seconds; enables physical-unit reporting.
    #[arg(long)]
    pub ts: Option<f64>,

    /// Output directory.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,

    /// Averaging operand for random mode: magnitude | power.
    #[arg(long)]
    pub avg: Option<String>,

    /// Draw a fresh CP-AFDM permutation per realization (random mode).
    #[arg(long = "randomize-perm", action = clap::ArgAction::SetTrue)]
    pub randomize_perm: bool,

    /// Also export the full surface per waveform (single realization only).
    #[arg(long = "keep-surface", action = clap::ArgAction::SetTrue)]
    pub keep_surface: bool,
}

/// The same keys, as an optional-everything TOML document.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub waveforms: Option<Vec<String>>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub perm_seed: Option<u64>,
    pub mode: Option<String>,
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub seed: Option<u64>,
    pub otau: Option<usize>,
    pub onu: Option<usize>,
    pub lh: Option<usize>,
    pub window: Option<String>,
    pub numax: Option<f64>,
    pub ts: Option<f64>,
    pub out_dir: Option<String>,
    pub avg: Option<String>,
    pub randomize_perm: Option<bool>,
    pub keep_surface: Option<bool>,
}

/// Fully resolved invocation.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub campaign: CampaignConfig,
    pub out_dir: PathBuf,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn parse_window(text: &str) -> Result<WindowKind, CliError> {
    let lower = text.to_ascii_lowercase();
    if lower == "hann" {
        return Ok(WindowKind::Hann);
    }
    if lower == "rect" || lower == "rectangular" {
        return Ok(WindowKind::Rectangular);
    }
    if lower == "kaiser" {
        return Ok(WindowKind::Kaiser { beta: 8.6 });
    }
    if let Some(beta) = lower.strip_prefix("kaiser:") {
        let beta: f64 = beta
            .parse()
            .map_err(|_| config_err(format!("window: invalid kaiser beta in `{text}`")))?;
        return Ok(WindowKind::Kaiser { beta });
    }
    Err(config_err(format!(
        "window: unknown kind `{text}` (expected hann, rectangular, or kaiser:<beta>)"
    )))
}

fn parse_waveform(
    name: &str,
    n: usize,
    k: usize,
    l: usize,
    c1: f64,
    c2: f64,
    perm_seed: u64,
) -> Result<WaveformSpec, CliError> {
    let _ = n;
    match name.to_ascii_lowercase().as_str() {
        "ofdm" => Ok(WaveformSpec::Ofdm),
        "otfs" => Ok(WaveformSpec::Otfs {
            delay_bins: k,
            doppler_bins: l,
        }),
        "afdm" => Ok(WaveformSpec::Afdm { c1, c2 }),
        "cp-afdm" | "cpafdm" => Ok(WaveformSpec::CpAfdm {
            c1,
            c2,
            permutation: PermutationSpec::Seeded(perm_seed),
        }),
        other => Err(config_err(format!(
            "waveform: unknown kind `{other}` (expected ofdm, otfs, afdm, cp-afdm)"
        ))),
    }
}

fn load_file(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_err(format!("config {}: {e}", path.display())))
}

/// Merge defaults, optional preset, optional file, and flags.
pub fn resolve(args: &CampaignArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let preset_name = args.preset.as_ref().or(file.preset.as_ref());
    if let Some(name) = preset_name {
        if name != "paper-table1" {
            return Err(config_err(format!(
                "preset: unknown preset `{name}` (available: paper-table1)"
            )));
        }
    }
    // The benchmark preset also serves as the default base configuration.
    let base = CampaignConfig::table1_preset();

    let n = args.n.or(file.n).unwrap_or(base.block_len);
    let k = args.k.or(file.k).unwrap_or(12);
    let l = args.l.or(file.l).unwrap_or(12);
    let c1 = args.c1.or(file.c1).unwrap_or(5.0 / (2.0 * n as f64));
    let c2 = args.c2.or(file.c2).unwrap_or(1.0 / (2.0 * n as f64));
    let perm_seed = args.perm_seed.or(file.perm_seed).unwrap_or(0);

    let wf_names: Vec<String> = if !args.waveform.is_empty() {
        args.waveform.clone()
    } else if let Some(names) = &file.waveforms {
        names.clone()
    } else {
        vec![
            "ofdm".into(),
            "otfs".into(),
            "afdm".into(),
            "cp-afdm".into(),
        ]
    };
    let waveforms = wf_names
        .iter()
        .map(|name| parse_waveform(name, n, k, l, c1, c2, perm_seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mode_name = args
        .mode
        .clone()
        .or(file.mode.clone())
        .unwrap_or_else(|| "unimodular".into());
    let mode = match mode_name.to_ascii_lowercase().as_str() {
        "unimodular" => SignalingMode::Unimodular,
        "random" => SignalingMode::Random {
            qam_order: args.m.or(file.m).unwrap_or(16),
            realizations: args.r.or(file.r).unwrap_or(100),
            master_seed: args.seed.or(file.seed).unwrap_or(0),
        },
        other => {
            return Err(config_err(format!(
                "mode: unknown mode `{other}` (expected random or unimodular)"
            )))
        }
    };

    let window = match args.window.as_ref().or(file.window.as_ref()) {
        Some(text) => parse_window(text)?,
        None => WindowKind::Hann,
    };
    let af = AfConfig {
        delay_oversampling: args.otau.or(file.otau).unwrap_or(4),
        doppler_oversampling: args.onu.or(file.onu).unwrap_or(4),
        interp_half_width: args.lh.or(file.lh).unwrap_or(4),
        window,
        doppler_half_range: args.numax.or(file.numax).unwrap_or(0.5),
    };

    let averaging = match args
        .avg
        .clone()
        .or(file.avg.clone())
        .unwrap_or_else(|| "magnitude".into())
        .to_ascii_lowercase()
        .as_str()
    {
        "magnitude" => AveragingOperand::Magnitude,
        "power" => AveragingOperand::Power,
        other => {
            return Err(config_err(format!(
                "avg: unknown operand `{other}` (expected magnitude or power)"
            )))
        }
    };

    let campaign = CampaignConfig {
        block_len: n,
        waveforms,
        mode,
        af,
        randomize_permutation: args.randomize_perm || file.randomize_perm.unwrap_or(false),
        sample_period: args.ts.or(file.ts),
        averaging,
        keep_surface: args.keep_surface || file.keep_surface.unwrap_or(false),
    };
    campaign.validate().map_err(|e| config_err(e.to_string()))?;

    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| file.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("afkit_out"));

    Ok(Resolved { campaign, out_dir })
}
