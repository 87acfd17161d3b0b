//! Result serialization: plot-ready CSV files and the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use vsatrack::montecarlo::{
    error_cdf, simulate_scene, run_sweep_full, ExperimentConfig, Method, SweepOutput,
};
use vsatrack::scenario::{sample_state, TrajectoryShape};
use vsatrack::tracking::{track_ekf_baseline, track_trilateration, track_vsa};

use crate::config::{canonical_json, config_hash};
use crate::CliError;

/// Provenance record written next to every command's outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    /// Digest of the canonical configuration document.
    pub config_hash: String,
    pub tool_version: String,
    pub base_seed: u64,
    /// Wall-clock start, seconds since the Unix epoch.
    pub started_unix_s: u64,
    /// Files this run wrote, relative to the output directory.
    pub outputs: Vec<String>,
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_manifest(
    dir: &Path,
    config: &ExperimentConfig,
    outputs: &[&str],
) -> Result<(), CliError> {
    let manifest = RunManifest {
        config_hash: config_hash(config),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        base_seed: config.base_seed,
        started_unix_s: now_unix(),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable");
    text.push('\n');
    write_file(dir, "manifest.json", &text)
}

fn fmt_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.6}"),
        None => String::new(),
    }
}

/// Runs one seeded scene through all three estimators and writes the
/// side-by-side trajectory CSV plus the manifest.
pub fn cmd_simulate(config: &ExperimentConfig, out_dir: &Path) -> Result<(), CliError> {
    let (track, measurements) =
        simulate_scene(config, 0).map_err(|e| CliError::Schema(e.to_string()))?;
    let radars = config.scenario.radars();
    let bounds = &config.scenario.bounds;
    let ekf_params = config.ekf_params();

    let raw = track_trilateration(&measurements, &radars, bounds);
    let ekf = track_ekf_baseline(&measurements, &radars, &ekf_params, bounds).positions();
    let vsa = track_vsa(&measurements, &radars, &config.vsa, &ekf_params, bounds).positions();

    let mut csv = String::from(
        "t_s,truth_x_m,truth_y_m,raw_x_m,raw_y_m,ekf_x_m,ekf_y_m,vsa_x_m,vsa_y_m,err_ekf_m,err_vsa_m\n",
    );
    for k in 0..measurements.len() {
        let t = k as f64 * config.scenario.cadence;
        let Ok((truth, _)) = sample_state(&track, t) else {
            continue;
        };
        let err = |p: &Option<vsatrack::Point2>| p.map(|p| (p - truth).norm());
        let row = [
            Some(t),
            Some(truth.x),
            Some(truth.y),
            raw[k].map(|p| p.x),
            raw[k].map(|p| p.y),
            ekf[k].map(|p| p.x),
            ekf[k].map(|p| p.y),
            vsa[k].map(|p| p.x),
            vsa[k].map(|p| p.y),
            err(&ekf[k]),
            err(&vsa[k]),
        ];
        let cells: Vec<String> = row.iter().map(|v| fmt_cell(*v)).collect();
        let _ = writeln!(csv, "{}", cells.join(","));
    }

    write_file(out_dir, "trajectory.csv", &csv)?;
    write_file(out_dir, "config.json", &canonical_json(config))?;
    write_manifest(out_dir, config, &["trajectory.csv", "config.json"])?;
    Ok(())
}

fn sweep_csv(output: &SweepOutput) -> String {
    let mut csv = String::from("axis_value,method,mean_rmse_m,std_rmse_m,mean_wall_time_s\n");
    for row in &output.table.rows {
        let _ = writeln!(
            csv,
            "{:.6},{},{:.6},{:.6},{:.6}",
            row.axis_value,
            row.method.name(),
            row.mean_rmse,
            row.std_rmse,
            row.mean_wall_time
        );
    }
    csv
}

fn cdf_csv(output: &SweepOutput) -> String {
    let mut csv = String::from("axis_value,method,error_m,cumulative_fraction\n");
    for (value, method, trials) in &output.trials {
        let pooled: Vec<f64> = trials
            .iter()
            .flat_map(|t| t.per_frame_errors.iter().copied())
            .collect();
        if let Ok(points) = error_cdf(&pooled, 100) {
            for (error, fraction) in points {
                let _ = writeln!(
                    csv,
                    "{:.6},{},{:.6},{:.6}",
                    value,
                    method.name(),
                    error,
                    fraction
                );
            }
        }
    }
    csv
}

/// Runs the configured Monte Carlo sweep and writes the aggregate CSV, the
/// resolved configuration, the manifest, and optionally the error CDF.
pub fn cmd_montecarlo(
    config: &ExperimentConfig,
    out_dir: &Path,
    emit_cdf: bool,
) -> Result<(), CliError> {
    let output = run_sweep_full(config).map_err(|e| CliError::Schema(e.to_string()))?;
    write_file(out_dir, "sweep.csv", &sweep_csv(&output))?;
    write_file(out_dir, "config.json", &canonical_json(config))?;
    let mut outputs = vec!["sweep.csv", "config.json"];
    if emit_cdf {
        write_file(out_dir, "cdf.csv", &cdf_csv(&output))?;
        outputs.push("cdf.csv");
    }
    write_manifest(out_dir, config, &outputs)?;
    Ok(())
}

fn trajectory_label(config: &ExperimentConfig) -> &'static str {
    match config.scenario.trajectory.shape {
        TrajectoryShape::Rhombus { .. } => "rhombus",
        TrajectoryShape::Circle { .. } => "circle",
        TrajectoryShape::Star { .. } => "star",
        TrajectoryShape::WaypointList { .. } => "line",
    }
}

fn method_label(method: Method) -> &'static str {
    match method {
        Method::Trilateration => "Trilateration",
        Method::EkfBaseline => "EKF",
        Method::Vsa => "Proposed",
    }
}

fn fnv1a64(bytes: &[u8]) -> String {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(PRIME);
    }
    format!("fnv1a64:{hash:016x}")
}

struct LoadedRun {
    trajectory: &'static str,
    /// Per-method mean RMSE at the run's first axis value.
    rows: Vec<(Method, f64)>,
}

fn load_run(dir: &Path) -> Result<LoadedRun, CliError> {
    let manifest_path = dir.join("manifest.json");
    let manifest_text = std::fs::read_to_string(&manifest_path).map_err(|e| {
        CliError::Data(format!("missing manifest {}: {e}", manifest_path.display()))
    })?;
    let manifest: RunManifest = serde_json::from_str(&manifest_text)
        .map_err(|e| CliError::Data(format!("bad manifest {}: {e}", manifest_path.display())))?;

    let config_path = dir.join("config.json");
    let config_bytes = std::fs::read(&config_path)
        .map_err(|e| CliError::Data(format!("missing config {}: {e}", config_path.display())))?;
    if fnv1a64(&config_bytes) != manifest.config_hash {
        return Err(CliError::Data(format!(
            "config hash mismatch in {}",
            dir.display()
        )));
    }
    for name in &manifest.outputs {
        if !dir.join(name).exists() {
            return Err(CliError::Data(format!(
                "manifest lists missing output {name} in {}",
                dir.display()
            )));
        }
    }

    let doc: crate::config::ConfigDoc = serde_json::from_slice(&config_bytes)
        .map_err(|e| CliError::Data(format!("bad config {}: {e}", config_path.display())))?;
    let config = crate::config::resolve(&doc)?;

    let csv_path = dir.join("sweep.csv");
    let csv = std::fs::read_to_string(&csv_path)
        .map_err(|e| CliError::Data(format!("missing results {}: {e}", csv_path.display())))?;
    let mut rows = Vec::new();
    let mut first_axis: Option<String> = None;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::Data(format!("malformed row in {}", csv_path.display())));
        }
        let axis = fields[0].to_string();
        match &first_axis {
            None => first_axis = Some(axis),
            Some(first) if *first != axis => continue,
            _ => {}
        }
        let method = match fields[1] {
            "trilateration" => Method::Trilateration,
            "ekf_baseline" => Method::EkfBaseline,
            "vsa" => Method::Vsa,
            other => return Err(CliError::Data(format!("unknown method {other}"))),
        };
        let rmse: f64 = fields[2]
            .parse()
            .map_err(|e| CliError::Data(format!("bad rmse in {}: {e}", csv_path.display())))?;
        rows.push((method, rmse));
    }

    Ok(LoadedRun {
        trajectory: trajectory_label(&config),
        rows,
    })
}

/// Prints a per-trajectory, per-method RMSE table from previous run outputs.
pub fn cmd_report(dirs: &[PathBuf]) -> Result<(), CliError> {
    if dirs.is_empty() {
        return Err(CliError::Data("report needs at least one run directory".into()));
    }
    let runs: Vec<LoadedRun> = dirs
        .iter()
        .map(|d| load_run(d))
        .collect::<Result<_, _>>()?;

    let mut methods: Vec<Method> = Vec::new();
    for run in &runs {
        for (m, _) in &run.rows {
            if !methods.contains(m) {
                methods.push(*m);
            }
        }
    }

    print!("{:<14}", "RMSE (m)");
    for run in &runs {
        print!("{:>12}", run.trajectory);
    }
    println!();
    for method in methods {
        print!("{:<14}", method_label(method));
        for run in &runs {
            let cell = run
                .rows
                .iter()
                .find(|(m, _)| *m == method)
                .map(|(_, rmse)| format!("{rmse:.3}"))
                .unwrap_or_else(|| "-".into());
            print!("{cell:>12}");
        }
        println!();
    }
    Ok(())
}
