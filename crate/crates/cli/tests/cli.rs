//! End-to-end tests of the command-line interface: exit codes, output
//! schemas, and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsatrack"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vsatrack-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn");
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().expect("spawn").status.code().unwrap_or(-1)
}

#[test]
fn simulate_writes_schema_and_is_deterministic() {
    let dir_a = temp_dir("sim-a");
    let dir_b = temp_dir("sim-b");
    for dir in [&dir_a, &dir_b] {
        run_ok(bin().args([
            "simulate",
            "--preset",
            "fig5",
            "--seed",
            "7",
            "--out",
            dir.to_str().unwrap(),
        ]));
    }
    let csv_a = read(&dir_a.join("trajectory.csv"));
    let csv_b = read(&dir_b.join("trajectory.csv"));
    assert_eq!(csv_a, csv_b, "same seed must give byte-identical CSV");

    let mut lines = csv_a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t_s,truth_x_m,truth_y_m,raw_x_m,raw_y_m,ekf_x_m,ekf_y_m,vsa_x_m,vsa_y_m,err_ekf_m,err_vsa_m"
    );
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 11, "row: {line}");
        for idx in [9usize, 10] {
            if !cells[idx].is_empty() {
                let v: f64 = cells[idx].parse().unwrap();
                assert!(v >= 0.0, "error column negative: {line}");
            }
        }
        rows += 1;
    }
    assert!(rows > 10);
    assert!(csv_a.ends_with('\n'));

    // Different seed, different bytes.
    let dir_c = temp_dir("sim-c");
    run_ok(bin().args([
        "simulate",
        "--preset",
        "fig5",
        "--seed",
        "8",
        "--out",
        dir_c.to_str().unwrap(),
    ]));
    assert_ne!(csv_a, read(&dir_c.join("trajectory.csv")));

    for dir in [dir_a, dir_b, dir_c] {
        let _ = std::fs::remove_dir_all(dir);
    }
}

#[test]
fn montecarlo_sweep_rows_and_worker_invariance() {
    let dir_a = temp_dir("mc-a");
    let dir_b = temp_dir("mc-b");
    for (dir, jobs) in [(&dir_a, "1"), (&dir_b, "4")] {
        run_ok(bin().args([
            "montecarlo",
            "--preset",
            "fig6a",
            "--trials",
            "2",
            "--jobs",
            jobs,
            "--emit-cdf",
            "--out",
            dir.to_str().unwrap(),
        ]));
    }
    let csv_a = read(&dir_a.join("sweep.csv"));
    let csv_b = read(&dir_b.join("sweep.csv"));

    // 5 axis values x 2 methods = 10 data rows.
    assert_eq!(csv_a.lines().count(), 11);
    assert_eq!(
        csv_a.lines().next().unwrap(),
        "axis_value,method,mean_rmse_m,std_rmse_m,mean_wall_time_s"
    );

    // Aggregates are invariant to the worker count; wall time is not.
    let strip_time = |csv: &str| -> Vec<String> {
        csv.lines()
            .skip(1)
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(strip_time(&csv_a), strip_time(&csv_b));

    // CDF output: monotone, ends at fraction 1.
    let cdf = read(&dir_a.join("cdf.csv"));
    let mut last_key = String::new();
    let mut last_fraction = 0.0;
    let mut final_fractions = Vec::new();
    for line in cdf.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        let key = format!("{},{}", cells[0], cells[1]);
        let fraction: f64 = cells[3].parse().unwrap();
        if key != last_key {
            if !last_key.is_empty() {
                final_fractions.push(last_fraction);
            }
            last_key = key;
            last_fraction = 0.0;
        }
        assert!(fraction + 1e-12 >= last_fraction, "CDF not monotone: {line}");
        last_fraction = fraction;
    }
    final_fractions.push(last_fraction);
    for f in final_fractions {
        assert!((f - 1.0).abs() < 1e-9, "CDF must end at 1, got {f}");
    }

    for dir in [dir_a, dir_b] {
        let _ = std::fs::remove_dir_all(dir);
    }
}

#[test]
fn config_file_round_trip_and_overrides() {
    let dir = temp_dir("cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("exp.json");
    std::fs::write(
        &config_path,
        r#"{"scenario": "fig5", "method": "vsa", "trials": 2, "seed": 11}"#,
    )
    .unwrap();
    let out = dir.join("run");
    run_ok(bin().args([
        "montecarlo",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));

    // The emitted canonical config parses back to the same run: rerunning
    // from it reproduces sweep.csv except the volatile wall-time column.
    let out2 = dir.join("run2");
    run_ok(bin().args([
        "montecarlo",
        "--config",
        out.join("config.json").to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]));
    let strip_time = |csv: &str| -> Vec<String> {
        csv.lines()
            .skip(1)
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    assert_eq!(
        strip_time(&read(&out.join("sweep.csv"))),
        strip_time(&read(&out2.join("sweep.csv")))
    );
    assert_eq!(read(&out.join("config.json")), read(&out2.join("config.json")));

    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn noiseless_simulate_stays_within_grid_quantization() {
    let dir = temp_dir("noiseless");
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("clean.json");
    // 200 dB SNR with no outliers is numerically noiseless.
    std::fs::write(
        &config_path,
        r#"{"scenario": "line", "noise": {"snr_db": 200.0, "outlier_prob": 0.0}}"#,
    )
    .unwrap();
    let out = dir.join("run");
    run_ok(bin().args([
        "simulate",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));
    let csv = read(&out.join("trajectory.csv"));
    let mut max_err: f64 = 0.0;
    for line in csv.lines().skip(4) {
        let cells: Vec<&str> = line.split(',').collect();
        if let Ok(err) = cells[10].parse::<f64>() {
            max_err = max_err.max(err);
        }
    }
    // Grid cells in this geometry are about 4 cm across.
    assert!(max_err <= 0.06, "max err_vsa_m {max_err}");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn schema_errors_exit_one() {
    let dir = temp_dir("schema");
    std::fs::create_dir_all(&dir).unwrap();

    // Malformed JSON.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let mut cmd = bin();
    cmd.args(["montecarlo", "--config", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&mut cmd), 1);

    // Unknown key.
    let unknown = dir.join("unknown.json");
    std::fs::write(&unknown, r#"{"scenario": "fig5", "bogus": 3}"#).unwrap();
    let mut cmd = bin();
    cmd.args(["montecarlo", "--config", unknown.to_str().unwrap()]);
    assert_eq!(exit_code(&mut cmd), 1);

    // Constraint violation names the field.
    let range = dir.join("range.json");
    std::fs::write(
        &range,
        r#"{"scenario": "fig5", "noise": {"outlier_prob": 1.5}}"#,
    )
    .unwrap();
    let out = bin()
        .args(["montecarlo", "--config", range.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("outlier_prob"), "stderr: {stderr}");

    // Unknown preset.
    let mut cmd = bin();
    cmd.args(["montecarlo", "--preset", "fig9000"]);
    assert_eq!(exit_code(&mut cmd), 1);

    // Neither config nor preset.
    let mut cmd = bin();
    cmd.args(["montecarlo"]);
    assert_eq!(exit_code(&mut cmd), 1);

    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn report_verifies_manifests() {
    // Missing manifest: exit 2.
    let empty = temp_dir("report-empty");
    std::fs::create_dir_all(&empty).unwrap();
    let mut cmd = bin();
    cmd.arg("report").arg(&empty);
    assert_eq!(exit_code(&mut cmd), 2);

    // Valid run reports fine; tampering with the config breaks the hash.
    let run = temp_dir("report-run");
    run_ok(bin().args([
        "montecarlo",
        "--preset",
        "fig5",
        "--trials",
        "2",
        "--out",
        run.to_str().unwrap(),
    ]));
    let out = run_ok(bin().arg("report").arg(&run));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Proposed"), "stdout: {stdout}");
    assert!(stdout.contains("Trilateration"), "stdout: {stdout}");

    let config_path = run.join("config.json");
    let mut text = read(&config_path);
    text.push_str("\n \n");
    std::fs::write(&config_path, text).unwrap();
    let mut cmd = bin();
    cmd.arg("report").arg(&run);
    assert_eq!(exit_code(&mut cmd), 2);

    for dir in [empty, run] {
        let _ = std::fs::remove_dir_all(dir);
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = temp_dir("io");
    std::fs::create_dir_all(&dir).unwrap();
    let blocker = dir.join("file");
    std::fs::write(&blocker, "x").unwrap();
    // Output "directory" nested under a regular file cannot be created.
    let mut cmd = bin();
    cmd.args([
        "simulate",
        "--preset",
        "fig5",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&mut cmd), 3);
    let _ = std::fs::remove_dir_all(dir);
}
