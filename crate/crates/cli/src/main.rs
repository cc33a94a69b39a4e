//! Command-line front end: campaign runs, single-signal surfaces, and
//! metric recomputation from exported cuts.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for I/O errors.

mod config;
mod export;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afkit_core::campaign::{run_campaign, CampaignConfig, CampaignResult, SignalingMode};
use afkit_core::metrics::analyze_cut;
use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl From<afkit_core::Error> for CliError {
    fn from(e: afkit_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "afkit",
    version,
    about = "Delay-Doppler ambiguity analysis of multicarrier waveforms \
             (OFDM, OTFS, AFDM, CP-AFDM)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a signaling campaign and export cuts, metrics, a summary table,
    /// and a manifest.
    Run(config::CampaignArgs),
    /// Compute the full surface and both cuts of a single waveform.
    Af(AfArgs),
    /// Recompute metrics from an exported cut CSV.
    Metrics(MetricsArgs),
}

#[derive(clap::Args)]
struct AfArgs {
    #[command(flatten)]
    common: config::CampaignArgs,
    /// Surface layout: matrix (axes on the first row/column) or flat
    /// tau,nu,magnitude triplets.
    #[arg(long = "surface-format", default_value = "matrix")]
    surface_format: String,
}

#[derive(clap::Args)]
struct MetricsArgs {
    /// Cut CSV produced by `run` or `af`.
    #[arg(long)]
    input: PathBuf,
    /// Optional JSON output path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Af(args) => cmd_af(&args),
        Command::Metrics(args) => cmd_metrics(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Filename stem per waveform, de-duplicated when a label repeats.
fn run_stems(result: &CampaignResult) -> Vec<String> {
    let mut seen = std::collections::HashMap::new();
    result
        .runs
        .iter()
        .map(|run| {
            let base = run.label.to_ascii_lowercase().replace([' ', '/'], "-");
            let count = seen.entry(base.clone()).or_insert(0usize);
            *count += 1;
            if *count == 1 {
                base
            } else {
                format!("{base}_{count}")
            }
        })
        .collect()
}

/// Export every cut (CSV + metrics JSON) and optional surfaces; returns the
/// list of written files.
fn export_runs(
    out_dir: &Path,
    result: &CampaignResult,
    flat_surface: bool,
) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    let stems = run_stems(result);
    let n = result.config.block_len;
    let ts = result.config.sample_period;
    for (run, stem) in result.runs.iter().zip(&stems) {
        for (cut, metrics, suffix) in [
            (&run.delay_cut, &run.delay_metrics, "zero_doppler"),
            (&run.doppler_cut, &run.doppler_metrics, "zero_delay"),
        ] {
            let csv = out_dir.join(format!("{stem}_{suffix}.csv"));
            export::write_cut_csv(&csv, cut)?;
            files.push(csv);
            let report = export::metrics_report(cut, metrics, n, ts);
            let json = out_dir.join(format!("{stem}_{suffix}.metrics.json"));
            export::write_json(&json, &report)?;
            files.push(json);
        }
        if let Some(surface) = &run.surface {
            let path = out_dir.join(format!("{stem}_surface.csv"));
            export::write_surface_csv(&path, surface, flat_surface)?;
            files.push(path);
        }
    }
    Ok(files)
}

fn cmd_run(args: &config::CampaignArgs) -> Result<(), CliError> {
    let resolved = config::resolve(args)?;
    let result = run_campaign(&resolved.campaign)?;
    ensure_dir(&resolved.out_dir)?;
    let mut files = export_runs(&resolved.out_dir, &result, false)?;

    let table_txt = resolved.out_dir.join("table.txt");
    let rendered = export::render_table(&result);
    std::fs::write(&table_txt, &rendered)
        .map_err(|e| CliError::Io(format!("{}: {e}", table_txt.display())))?;
    files.push(table_txt);
    let table_json = resolved.out_dir.join("table.json");
    export::write_json(&table_json, &export::table_rows(&result))?;
    files.push(table_json);

    export::write_manifest(&resolved.out_dir, &result.config, &files)?;
    print!("{rendered}");
    println!("wrote {} files to {}", files.len() + 1, resolved.out_dir.display());
    Ok(())
}

fn cmd_af(args: &AfArgs) -> Result<(), CliError> {
    let resolved = config::resolve(&args.common)?;
    if resolved.campaign.waveforms.len() != 1 {
        return Err(CliError::Config(format!(
            "af: exactly one --waveform is required, got {}",
            resolved.campaign.waveforms.len()
        )));
    }
    let flat = match args.surface_format.as_str() {
        "matrix" => false,
        "flat" => true,
        other => {
            return Err(CliError::Config(format!(
                "surface-format: unknown layout `{other}` (expected matrix or flat)"
            )))
        }
    };
    // A single signal: unimodular as-is, random collapses to one draw.
    let mut campaign = resolved.campaign.clone();
    if let SignalingMode::Random {
        qam_order,
        master_seed,
        ..
    } = campaign.mode
    {
        campaign.mode = SignalingMode::Random {
            qam_order,
            realizations: 1,
            master_seed,
        };
    }
    campaign.keep_surface = true;
    let result = run_campaign(&campaign)?;
    ensure_dir(&resolved.out_dir)?;
    let files = export_runs(&resolved.out_dir, &result, flat)?;
    export::write_manifest(&resolved.out_dir, &result.config, &files)?;
    print!("{}", export::render_table(&result));
    println!("wrote {} files to {}", files.len() + 1, resolved.out_dir.display());
    Ok(())
}

fn cmd_metrics(args: &MetricsArgs) -> Result<(), CliError> {
    let cut = export::read_cut_csv(&args.input)?;
    let metrics = analyze_cut(&cut);
    let report = export::metrics_report(&cut, &metrics, 0, None);
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("metrics: {e}")))?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

// Keep the default campaign constructor reachable for integration tests.
#[allow(dead_code)]
fn default_campaign() -> CampaignConfig {
    CampaignConfig::table1_preset()
}
