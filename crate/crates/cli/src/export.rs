//! Stable text serialization of cuts, surfaces, metric reports, and the
//! run manifest.
//!
//! Cut CSV layout: header `axis,magnitude,magnitude_db`, one row per grid
//! point. Axis and magnitude carry 12 decimal places; the dB column is the
//! shortest representation that round-trips, floored at -400 dB (below any
//! value a peak-normalized f64 cut can produce, while keeping the file free
//! of infinities).
//!
//! Surface CSV layout (matrix form): cell (0,0) is empty, the rest of row 0
//! is the Doppler axis, the rest of column 0 is the delay axis, and cell
//! (1+i, 1+j) is the magnitude at delay i, Doppler j — a 2x2 surface
//! becomes a 3x3 CSV. The flat form is a `tau,nu,magnitude` triplet list.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use afkit_core::ambiguity::{AfCut, AfSurface, CutKind};
use afkit_core::campaign::{CampaignConfig, CampaignResult, WaveformRun};
use afkit_core::metrics::CutMetrics;
use serde::Serialize;
use sha2::Digest;

use crate::CliError;

/// Floor for the logarithmic magnitude column.
pub const DB_FLOOR: f64 = -400.0;

pub fn fmt_fixed12(x: f64) -> String {
    format!("{x:.12}")
}

/// Shortest f64 representation that round-trips ("0.0", "-16.09...").
pub fn fmt_db(x: f64) -> String {
    format!("{x:?}")
}

/// 20*log10(|magnitude|) clamped at the floor.
pub fn magnitude_db(magnitude: f64) -> f64 {
    if magnitude <= 0.0 {
        return DB_FLOOR;
    }
    (20.0 * magnitude.log10()).max(DB_FLOOR)
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_cut_csv(path: &Path, cut: &AfCut) -> Result<(), CliError> {
    let mut text = String::from("axis,magnitude,magnitude_db\n");
    for (axis, value) in cut.axis.iter().zip(&cut.values) {
        text.push_str(&fmt_fixed12(*axis));
        text.push(',');
        text.push_str(&fmt_fixed12(*value));
        text.push(',');
        text.push_str(&fmt_db(magnitude_db(*value)));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Parse a cut CSV written by [`write_cut_csv`]. The cut kind is not stored
/// in the file; metric extraction does not depend on it.
pub fn read_cut_csv(path: &Path) -> Result<AfCut, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("axis,magnitude,magnitude_db") => {}
        other => {
            return Err(CliError::Config(format!(
                "{}: expected header `axis,magnitude,magnitude_db`, found {other:?}",
                path.display()
            )))
        }
    }
    let mut axis = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64, CliError> {
            field
                .and_then(|f| f.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "{}: malformed row {} `{line}`",
                        path.display(),
                        lineno + 2
                    ))
                })
        };
        axis.push(parse(fields.next())?);
        values.push(parse(fields.next())?);
    }
    if axis.len() < 2 {
        return Err(CliError::Config(format!(
            "{}: a cut needs at least two rows",
            path.display()
        )));
    }
    Ok(AfCut {
        values,
        axis,
        kind: CutKind::ZeroDoppler,
    })
}

/// Metric report serialized next to each cut.
#[derive(Debug, Serialize)]
pub struct MetricsReport<'a> {
    pub kind: &'a CutKind,
    #[serde(flatten)]
    pub metrics: &'a CutMetrics,
    /// 3 dB width in seconds (delay cuts when a sample period is given).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_3db_seconds: Option<f64>,
    /// 3 dB width in hertz (Doppler cuts when a sample period is given).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_3db_hertz: Option<f64>,
}

pub fn metrics_report<'a>(
    cut: &'a AfCut,
    metrics: &'a CutMetrics,
    block_len: usize,
    sample_period: Option<f64>,
) -> MetricsReport<'a> {
    let mut report = MetricsReport {
        kind: &cut.kind,
        metrics,
        width_3db_seconds: None,
        width_3db_hertz: None,
    };
    if let Some(ts) = sample_period {
        match cut.kind {
            CutKind::ZeroDoppler => {
                report.width_3db_seconds =
                    afkit_core::ambiguity::delay_to_seconds(metrics.width_3db, block_len, ts).ok();
            }
            CutKind::ZeroDelay => {
                report.width_3db_hertz =
                    afkit_core::ambiguity::doppler_to_hertz(metrics.width_3db, ts).ok();
            }
        }
    }
    report
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn write_surface_csv(path: &Path, surface: &AfSurface, flat: bool) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let result = if flat {
        write_surface_flat(&mut out, surface)
    } else {
        write_surface_matrix(&mut out, surface)
    };
    result.map_err(|e| io_err(path, e))
}

fn write_surface_matrix(
    out: &mut impl Write,
    surface: &AfSurface,
) -> Result<(), std::io::Error> {
    for nu in &surface.doppler_axis {
        write!(out, ",{}", fmt_fixed12(*nu))?;
    }
    writeln!(out)?;
    for (i, tau) in surface.delay_axis.iter().enumerate() {
        write!(out, "{}", fmt_fixed12(*tau))?;
        for j in 0..surface.n_doppler() {
            write!(out, ",{}", fmt_fixed12(surface.value(i, j)))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn write_surface_flat(out: &mut impl Write, surface: &AfSurface) -> Result<(), std::io::Error> {
    writeln!(out, "tau,nu,magnitude")?;
    for (i, tau) in surface.delay_axis.iter().enumerate() {
        for (j, nu) in surface.doppler_axis.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                fmt_fixed12(*tau),
                fmt_fixed12(*nu),
                fmt_fixed12(surface.value(i, j))
            )?;
        }
    }
    Ok(())
}

/// One table row mirroring the benchmark layout: widths first, then the
/// delay-cut and Doppler-cut sidelobe ratios.
#[derive(Debug, Serialize)]
pub struct TableRow {
    pub waveform: String,
    pub dtau_3db: f64,
    pub dnu_3db: f64,
    pub pslr_tau_db: Option<f64>,
    pub islr_tau_db: Option<f64>,
    pub pslr_nu_db: Option<f64>,
    pub islr_nu_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dtau_3db_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dnu_3db_hertz: Option<f64>,
    pub notes: String,
}

fn flag_notes(run: &WaveformRun) -> String {
    let mut notes = Vec::new();
    let mut collect = |prefix: &str, flags: &afkit_core::metrics::MetricFlags| {
        let mut parts = Vec::new();
        if flags.flat_cut {
            parts.push("flat");
        }
        if flags.width_clamped {
            parts.push("width-clamped");
        }
        if flags.no_sidelobes {
            parts.push("no-sidelobes");
        }
        if !parts.is_empty() {
            notes.push(format!("{prefix}:{}", parts.join("+")));
        }
    };
    collect("tau", &run.delay_metrics.flags);
    collect("nu", &run.doppler_metrics.flags);
    if notes.is_empty() {
        "-".into()
    } else {
        notes.join(" ")
    }
}

pub fn table_rows(result: &CampaignResult) -> Vec<TableRow> {
    let ts = result.config.sample_period;
    let n = result.config.block_len;
    result
        .runs
        .iter()
        .map(|run| TableRow {
            waveform: run.label.clone(),
            dtau_3db: run.delay_metrics.width_3db,
            dnu_3db: run.doppler_metrics.width_3db,
            pslr_tau_db: run.delay_metrics.pslr_db,
            islr_tau_db: run.delay_metrics.islr_db,
            pslr_nu_db: run.doppler_metrics.pslr_db,
            islr_nu_db: run.doppler_metrics.islr_db,
            dtau_3db_seconds: ts.and_then(|ts| {
                afkit_core::ambiguity::delay_to_seconds(run.delay_metrics.width_3db, n, ts).ok()
            }),
            dnu_3db_hertz: ts.and_then(|ts| {
                afkit_core::ambiguity::doppler_to_hertz(run.doppler_metrics.width_3db, ts).ok()
            }),
            notes: flag_notes(run),
        })
        .collect()
}

/// Aligned plain-text table, one row per waveform.
pub fn render_table(result: &CampaignResult) -> String {
    let rows = table_rows(result);
    let physical = result.config.sample_period.is_some();
    let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:9.4}")).unwrap_or("      n/a".into());
    let mut text = String::new();
    text.push_str(&format!(
        "{:<9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "waveform", "dtau_3db", "dnu_3db", "pslr_tau", "islr_tau", "pslr_nu", "islr_nu"
    ));
    if physical {
        text.push_str(&format!(" {:>12} {:>12}", "dtau_s", "dnu_hz"));
    }
    text.push_str("  notes\n");
    for row in &rows {
        text.push_str(&format!(
            "{:<9} {:>9.4} {:>9.4} {} {} {} {}",
            row.waveform,
            row.dtau_3db,
            row.dnu_3db,
            fmt_opt(row.pslr_tau_db),
            fmt_opt(row.islr_tau_db),
            fmt_opt(row.pslr_nu_db),
            fmt_opt(row.islr_nu_db),
        ));
        if physical {
            let fmt_phys =
                |v: Option<f64>| v.map(|x| format!("{x:12.5e}")).unwrap_or("         n/a".into());
            text.push_str(&format!(
                " {} {}",
                fmt_phys(row.dtau_3db_seconds),
                fmt_phys(row.dnu_3db_hertz)
            ));
        }
        text.push_str(&format!("  {}\n", row.notes));
    }
    text
}

/// Inventory entry of one emitted file.
#[derive(Debug, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Run provenance: configuration echo plus the output inventory. Re-running
/// with the same configuration reproduces every listed hash.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub created_unix_s: u64,
    pub config: &'a CampaignConfig,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let digest = sha2::Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Hash every emitted file and write `manifest.json` alongside them.
pub fn write_manifest(
    out_dir: &Path,
    config: &CampaignConfig,
    files: &[PathBuf],
) -> Result<PathBuf, CliError> {
    let mut entries = Vec::new();
    for path in files {
        let meta = fs::metadata(path).map_err(|e| io_err(path, e))?;
        entries.push(FileEntry {
            path: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            bytes: meta.len(),
            sha256: sha256_hex(path)?,
        });
    }
    let manifest = RunManifest {
        tool: "afkit",
        version: env!("CARGO_PKG_VERSION"),
        created_unix_s: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config,
        files: entries,
    };
    let path = out_dir.join("manifest.json");
    write_json(&path, &manifest)?;
    Ok(path)
}
