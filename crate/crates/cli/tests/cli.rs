//! End-to-end checks of the `afkit` binary: exit codes, output inventory,
//! manifest reproducibility, and metric recomputation from exported cuts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn afkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afkit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("afkit_cli_{name}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_manifest(dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("out/manifest.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn small_run_exports_cuts_metrics_table_and_manifest() {
    let dir = temp_dir("run");
    let out = afkit(
        &[
            "run",
            "--N",
            "24",
            "--K",
            "4",
            "--L",
            "6",
            "--otau",
            "2",
            "--onu",
            "2",
            "--out-dir",
            "out",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("OFDM") && stdout.contains("CP-AFDM"));

    for stem in ["ofdm", "otfs", "afdm", "cp-afdm"] {
        for suffix in ["zero_doppler", "zero_delay"] {
            assert!(dir.join(format!("out/{stem}_{suffix}.csv")).is_file());
            assert!(dir
                .join(format!("out/{stem}_{suffix}.metrics.json"))
                .is_file());
        }
    }
    assert!(dir.join("out/table.txt").is_file());
    assert!(dir.join("out/table.json").is_file());

    let manifest = read_manifest(&dir);
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 4 * 4 + 2);
    for entry in files {
        assert_eq!(entry["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn reruns_reproduce_identical_hashes() {
    let dir_a = temp_dir("repro_a");
    let dir_b = temp_dir("repro_b");
    let args = [
        "run",
        "--N",
        "16",
        "--waveform",
        "afdm",
        "--waveform",
        "cp-afdm",
        "--mode",
        "random",
        "--R",
        "24",
        "--seed",
        "9",
        "--otau",
        "2",
        "--onu",
        "2",
        "--randomize-perm",
        "--out-dir",
        "out",
    ];
    assert!(afkit(&args, &dir_a).status.success());
    assert!(afkit(&args, &dir_b).status.success());
    let hashes = |dir: &Path| -> Vec<(String, String)> {
        let manifest = read_manifest(dir);
        manifest["files"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (
                    e["path"].as_str().unwrap().to_string(),
                    e["sha256"].as_str().unwrap().to_string(),
                )
            })
            .collect()
    };
    assert_eq!(hashes(&dir_a), hashes(&dir_b));
}

#[test]
fn conflicting_grid_exits_with_configuration_code() {
    let dir = temp_dir("badgrid");
    let out = afkit(&["run", "--N", "100", "--K", "12", "--L", "12"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("K*L"), "stderr: {stderr}");
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let dir = temp_dir("badout");
    std::fs::write(dir.join("blocked"), "a file, not a directory").unwrap();
    let out = afkit(
        &[
            "run",
            "--N",
            "8",
            "--waveform",
            "ofdm",
            "--otau",
            "1",
            "--onu",
            "1",
            "--out-dir",
            "blocked/nested",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn af_exports_a_surface_and_metrics_recomputes_from_csv() {
    let dir = temp_dir("af");
    let out = afkit(
        &[
            "af",
            "--waveform",
            "afdm",
            "--N",
            "16",
            "--otau",
            "2",
            "--onu",
            "2",
            "--out-dir",
            "out",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let surface = std::fs::read_to_string(dir.join("out/afdm_surface.csv")).unwrap();
    let rows: Vec<&str> = surface.lines().collect();
    // 2(N-1)*O_tau + 1 = 61 delay rows plus the Doppler-axis header.
    assert_eq!(rows.len(), 62);
    assert_eq!(rows[0].split(',').count(), 33 + 1);

    // Metric recomputation from the exported cut matches the sibling report.
    let metrics_out = afkit(
        &["metrics", "--input", "out/afdm_zero_doppler.csv"],
        &dir,
    );
    assert!(metrics_out.status.success());
    let recomputed: serde_json::Value =
        serde_json::from_slice(&metrics_out.stdout).unwrap();
    let sibling: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/afdm_zero_doppler.metrics.json")).unwrap(),
    )
    .unwrap();
    let a = recomputed["width_3db"].as_f64().unwrap();
    let b = sibling["width_3db"].as_f64().unwrap();
    assert!(
        (a - b).abs() < 1e-9,
        "recomputed {a} vs exported {b} (12-digit serialization)"
    );
}

#[test]
fn missing_metrics_input_exits_with_io_code() {
    let dir = temp_dir("nometrics");
    let out = afkit(&["metrics", "--input", "missing.csv"], &dir);
    assert_eq!(out.status.code(), Some(3));
}
