//! Seeded Monte Carlo harness: positioning/tracking trials, robustness
//! sweeps, and RMSE/CDF aggregation.
//!
//! Trials are embarrassingly parallel. Every trial's RNG stream derives only
//! from (base seed, axis index, method, trial index), so results are
//! invariant to execution order and worker count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::RoomBounds;
use crate::scenario::{
    make_trajectory, sample_state, GroundTruthTrack, RadarNode, TrajectoryShape, TrajectorySpec,
    WaveformParams,
};
use crate::signal::{measurement_from_radial_smeared, NoiseModel, RadarMeasurement, SmearEffects};
use crate::tracking::{
    track_ekf_baseline, track_trilateration, track_vsa, EkfParams, VsaParams,
};
use crate::types::Point2;

/// Estimation method under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Trilateration,
    EkfBaseline,
    Vsa,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Trilateration => "trilateration",
            Method::EkfBaseline => "ekf_baseline",
            Method::Vsa => "vsa",
        }
    }

    fn id(&self) -> u64 {
        match self {
            Method::Trilateration => 0,
            Method::EkfBaseline => 1,
            Method::Vsa => 2,
        }
    }
}

/// Swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxisName {
    SnrDb,
    OutlierProb,
    ClockOffset,
    NPri,
    GridPoints,
}

impl SweepAxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxisName::SnrDb => "snr_db",
            SweepAxisName::OutlierProb => "outlier_prob",
            SweepAxisName::ClockOffset => "clock_offset",
            SweepAxisName::NPri => "n_pri",
            SweepAxisName::GridPoints => "grid_points",
        }
    }

    pub fn parse(name: &str) -> Result<Self, Error> {
        match name {
            "snr_db" => Ok(SweepAxisName::SnrDb),
            "outlier_prob" => Ok(SweepAxisName::OutlierProb),
            "clock_offset" => Ok(SweepAxisName::ClockOffset),
            "n_pri" => Ok(SweepAxisName::NPri),
            "grid_points" => Ok(SweepAxisName::GridPoints),
            other => Err(Error::UnknownAxis(other.into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub axis: SweepAxisName,
    pub values: Vec<f64>,
}

/// Physical scene: radar placement, waveform, trajectory, and the fusion
/// frame cadence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub radar_positions: Vec<Point2>,
    /// Trigger offset per radar, seconds; radar 1 is the fusion master.
    pub clock_offsets: Vec<f64>,
    pub waveform: WaveformParams,
    pub trajectory: TrajectorySpec,
    /// Simulated time span; closed shapes stop after one traversal.
    pub duration: f64,
    pub bounds: RoomBounds,
    /// Fusion frame cadence, s. Equals the waveform frame period except in
    /// the n_pri sweep, where integration windows slide at a fixed 50 ms.
    pub cadence: f64,
    /// When set, each trial translates the trajectory so its first point is
    /// drawn uniformly from this box (x_min, x_max, y_min, y_max).
    pub random_start_box: Option<[f64; 4]>,
}

impl ScenarioConfig {
    pub fn validated(self) -> Result<Self, Error> {
        if self.radar_positions.len() != 2 {
            return Err(Error::InvalidConfig(
                "scenario needs exactly two radars".into(),
            ));
        }
        if self.clock_offsets.len() != self.radar_positions.len() {
            return Err(Error::InvalidConfig(
                "clock_offsets must match radar count".into(),
            ));
        }
        if (self.radar_positions[0] - self.radar_positions[1]).norm() < 1e-9 {
            return Err(Error::InvalidConfig(
                "radar positions must be distinct".into(),
            ));
        }
        if !(self.duration > 0.0 && self.cadence > 0.0) {
            return Err(Error::InvalidConfig(
                "duration and cadence must be > 0".into(),
            ));
        }
        self.waveform.validated()?;
        Ok(self)
    }

    pub fn radars(&self) -> Vec<RadarNode> {
        self.radar_positions
            .iter()
            .zip(&self.clock_offsets)
            .enumerate()
            .map(|(i, (&pos, &offset))| {
                let mut node = RadarNode::new(i as u8 + 1, pos, self.waveform);
                node.clock_offset = offset;
                node
            })
            .collect()
    }
}

/// One experiment: scenario, methods, noise, estimator tuning, trial count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub methods: Vec<Method>,
    pub noise: NoiseModel,
    pub vsa: VsaParams,
    /// Spectral density of the white-noise-acceleration process model,
    /// m^2/s^3.
    pub process_noise_spectral: f64,
    /// Scale on the range-measurement sigma of the baseline EKF (its tuning
    /// is independent of the channel's CRLB constant).
    pub baseline_r_scale: f64,
    /// Scale on the fused-observation sigma fed to the EKF by the VSA stage
    /// (covers grid quantization on top of the channel sigmas).
    pub vsa_r_scale: f64,
    pub n_trials: usize,
    pub base_seed: u64,
    pub sweep: Option<SweepAxis>,
}

impl ExperimentConfig {
    pub fn validated(self) -> Result<Self, Error> {
        if self.n_trials < 1 {
            return Err(Error::InvalidConfig("n_trials must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one method must be configured".into(),
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::InvalidConfig("sweep values must be nonempty".into()));
            }
            if !sweep.values.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidConfig(
                    "sweep values must be strictly increasing".into(),
                ));
            }
        }
        self.noise.validated()?;
        self.vsa.validated()?;
        if !(self.process_noise_spectral > 0.0) {
            return Err(Error::InvalidConfig(
                "process_noise_spectral must be > 0".into(),
            ));
        }
        if !(self.baseline_r_scale > 0.0) {
            return Err(Error::InvalidConfig(
                "baseline_r_scale must be > 0".into(),
            ));
        }
        if !(self.vsa_r_scale > 0.0) {
            return Err(Error::InvalidConfig("vsa_r_scale must be > 0".into()));
        }
        let scenario = self.scenario.validated()?;
        Ok(Self { scenario, ..self })
    }

    /// Filter parameters for this configuration.
    pub fn ekf_params(&self) -> EkfParams {
        let mut params = EkfParams::from_sigmas(
            self.process_noise_spectral,
            self.noise.sigma_range(&self.scenario.waveform),
            self.noise.sigma_velocity(&self.scenario.waveform),
            self.scenario.cadence,
        );
        params.r_range_pair *= self.baseline_r_scale * self.baseline_r_scale;
        params.r_full *= self.vsa_r_scale * self.vsa_r_scale;
        params
    }

    /// Applies one sweep-axis value, returning the adjusted configuration.
    ///
    /// The n_pri axis holds T_PRI at its nominal value and the fusion
    /// cadence at 50 ms; coherent integration windows longer than the
    /// cadence slide across frames, so the waveform frame period is raised
    /// to the CPI to keep it self-consistent.
    pub fn with_axis_value(&self, axis: SweepAxisName, value: f64) -> Self {
        let mut cfg = self.clone();
        match axis {
            SweepAxisName::SnrDb => cfg.noise.snr_db = value,
            SweepAxisName::OutlierProb => cfg.noise.outlier_prob = value,
            SweepAxisName::ClockOffset => {
                // Latency applies between radar 1 and radar 2.
                cfg.scenario.clock_offsets[1] = value;
            }
            SweepAxisName::NPri => {
                let wf = &mut cfg.scenario.waveform;
                wf.chirps_per_frame = value as usize;
                wf.frame_period = cfg.scenario.cadence.max(wf.cpi());
            }
            SweepAxisName::GridPoints => cfg.vsa.grid_points = value as usize,
        }
        cfg
    }
}

/// Per-trial outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub trial_seed: u64,
    pub per_frame_errors: Vec<f64>,
    pub rmse: f64,
    /// Estimator wall time, seconds (excludes scene simulation).
    pub wall_time: f64,
    pub frames_coasted: usize,
}

/// Aggregated sweep output: one row per (axis value, method).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxisName,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub method: Method,
    pub mean_rmse: f64,
    pub std_rmse: f64,
    pub mean_wall_time: f64,
}

/// Root mean square of the error list.
pub fn rmse(errors: &[f64]) -> Result<f64, Error> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("rmse over empty error list"));
    }
    let sum_sq: f64 = errors.iter().map(|e| e * e).sum();
    Ok((sum_sq / errors.len() as f64).sqrt())
}

/// Empirical CDF sampled at `n_points` quantile levels.
///
/// Returns (error level, cumulative fraction) pairs: monotone non-decreasing
/// with final fraction 1.
pub fn error_cdf(errors: &[f64], n_points: usize) -> Result<Vec<(f64, f64)>, Error> {
    if errors.is_empty() || n_points == 0 {
        return Err(Error::EmptyInput("cdf over empty error list"));
    }
    let mut sorted = errors.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let quantile = |q: f64| -> f64 {
        let h = q * (n - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        if lo == hi {
            sorted[lo]
        } else {
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    };
    Ok((1..=n_points)
        .map(|j| {
            let level = quantile(j as f64 / n_points as f64);
            let fraction = sorted.iter().filter(|&&e| e <= level).count() as f64 / n as f64;
            (level, fraction)
        })
        .collect())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trial seed derived only from (base seed, axis index, method, trial index).
pub fn trial_seed(base_seed: u64, axis_index: usize, method: Method, trial_index: usize) -> u64 {
    let mut z = splitmix64(base_seed ^ 0xA076_1D64_78BD_642F);
    z = splitmix64(z ^ (axis_index as u64).wrapping_mul(0xE703_7ED1_A0B4_28DB));
    z = splitmix64(z ^ method.id().wrapping_mul(0x8EBC_6AF0_9C88_C6E3));
    z = splitmix64(z ^ (trial_index as u64).wrapping_mul(0x5895_88CA_A9D8_20DB));
    z
}

/// Seed for a method-independent scene realization.
fn scene_seed(base_seed: u64, trial_index: usize) -> u64 {
    let mut z = splitmix64(base_seed ^ 0x9E6C_63D0_876A_46C7);
    z = splitmix64(z ^ (trial_index as u64).wrapping_mul(0x5895_88CA_A9D8_20DB));
    z
}

/// Per-frame measurements, indexed frame-major then radar-major.
pub type MeasurementStream = Vec<Vec<Option<RadarMeasurement>>>;

/// One seeded scene realization (ground truth plus the measurement stream),
/// independent of the estimation method, for side-by-side comparisons.
pub fn simulate_scene(
    config: &ExperimentConfig,
    trial_index: usize,
) -> Result<(GroundTruthTrack, MeasurementStream), Error> {
    let seed = scene_seed(config.base_seed, trial_index);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let scenario = &config.scenario;
    let mut trajectory = scenario.trajectory.clone();
    if let Some([x_min, x_max, y_min, y_max]) = scenario.random_start_box {
        let start = Point2::new(
            x_min + rng.gen::<f64>() * (x_max - x_min),
            y_min + rng.gen::<f64>() * (y_max - y_min),
        );
        trajectory = translated_to_start(&trajectory, start);
    }
    let track = make_trajectory(&trajectory, scenario.cadence, scenario.duration)?;
    let radars = scenario.radars();
    let measurements = simulate_measurements(&track, &radars, scenario, &config.noise, &mut rng);
    Ok((track, measurements))
}

/// Radial velocity of the truth state relative to one radar.
fn radial_velocity(track: &GroundTruthTrack, t: f64, radar: Point2) -> Option<f64> {
    let (p, v) = sample_state(track, t).ok()?;
    let u = (p - radar).normalized()?;
    Some(v.dot(u))
}

/// Simulated measurement frames for one trial.
///
/// Frame k is stamped k * cadence on the fusion timeline; radar i physically
/// samples at its clock-offset time. The Doppler observable is the mean
/// radial velocity over the coherent integration window centered on the
/// sample instant, which is what long CPIs smear during maneuvers.
fn simulate_measurements(
    track: &GroundTruthTrack,
    radars: &[RadarNode],
    scenario: &ScenarioConfig,
    noise: &NoiseModel,
    rng: &mut ChaCha12Rng,
) -> Vec<Vec<Option<RadarMeasurement>>> {
    let cadence = scenario.cadence;
    let span_end = track.end_time();
    let max_offset = scenario
        .clock_offsets
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let n_frames = ((span_end - max_offset) / cadence).floor() as usize + 1;

    // Each radar produces one measurement per its own frame period, which is
    // at least the CPI: frames cannot overlap. When the CPI exceeds the
    // fusion cadence, intermediate fusion ticks see the last completed
    // measurement again (same stamp), so downstream estimators coast between
    // radar frames.
    let half_window = 0.5 * scenario.waveform.cpi();
    let mut last: Vec<Option<RadarMeasurement>> = vec![None; radars.len()];
    let mut next_tick: Vec<u64> = vec![0; radars.len()];
    let mut frames = Vec::with_capacity(n_frames);
    for k in 0..n_frames {
        let t_nominal = k as f64 * cadence;
        let mut frame = Vec::with_capacity(radars.len());
        for (i, radar) in radars.iter().enumerate() {
            let radar_period = radar.waveform.frame_period.max(cadence);
            let tick_time = next_tick[i] as f64 * radar_period;
            if t_nominal + 1e-12 >= tick_time {
                let t_sample = tick_time + radar.clock_offset;
                last[i] = sample_state(track, t_sample).ok().map(|(p, _)| {
                    let true_range = (p - radar.position).norm();
                    // Radial velocity statistics over the CPI window
                    // (clamped to the track span): the Doppler estimate is
                    // the Simpson-weighted mean, the spread within the
                    // window smears the Doppler peak, and the radial
                    // displacement across the window drives range-bin
                    // migration.
                    let lo = (t_sample - half_window).max(track.start_time());
                    let hi = (t_sample + half_window).min(span_end);
                    let weights = [1.0, 4.0, 2.0, 4.0, 1.0];
                    let mut samples = [0.0f64; 5];
                    let mut acc = 0.0;
                    let mut wsum = 0.0;
                    for (j, w) in weights.iter().enumerate() {
                        let t_j = lo + (hi - lo) * j as f64 / (weights.len() - 1) as f64;
                        if let Some(vr) = radial_velocity(track, t_j, radar.position) {
                            samples[j] = vr;
                            acc += w * vr;
                            wsum += w;
                        }
                    }
                    let v_radial = if wsum > 0.0 { acc / wsum } else { 0.0 };
                    let spread = samples
                        .iter()
                        .map(|vr| (vr - v_radial) * (vr - v_radial))
                        .sum::<f64>()
                        / samples.len() as f64;
                    let smear = SmearEffects::from_window(
                        &radar.waveform,
                        v_radial * (hi - lo),
                        spread.sqrt(),
                    );
                    measurement_from_radial_smeared(
                        radar, tick_time, true_range, v_radial, noise, smear, rng,
                    )
                });
                next_tick[i] += 1;
            }
            frame.push(last[i]);
        }
        frames.push(frame);
    }
    frames
}

/// Runs one Monte Carlo trial of the configured method.
pub fn run_trial(
    config: &ExperimentConfig,
    method: Method,
    axis_index: usize,
    trial_index: usize,
) -> Result<TrialResult, Error> {
    let seed = trial_seed(config.base_seed, axis_index, method, trial_index);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let scenario = &config.scenario;
    let mut trajectory = scenario.trajectory.clone();
    if let Some([x_min, x_max, y_min, y_max]) = scenario.random_start_box {
        let start = Point2::new(
            x_min + rng.gen::<f64>() * (x_max - x_min),
            y_min + rng.gen::<f64>() * (y_max - y_min),
        );
        trajectory = translated_to_start(&trajectory, start);
    }
    let track = make_trajectory(&trajectory, scenario.cadence, scenario.duration)?;
    let radars = scenario.radars();
    let measurements = simulate_measurements(&track, &radars, scenario, &config.noise, &mut rng);

    let started = Instant::now();
    let (positions, frames_coasted): (Vec<Option<Point2>>, usize) = match method {
        Method::Trilateration => {
            let est = track_trilateration(&measurements, &radars, &scenario.bounds);
            let missed = est.iter().filter(|p| p.is_none()).count();
            (est, missed)
        }
        Method::EkfBaseline => {
            let out = track_ekf_baseline(&measurements, &radars, &config.ekf_params(), &scenario.bounds);
            (out.positions(), out.frames_coasted)
        }
        Method::Vsa => {
            let out = track_vsa(
                &measurements,
                &radars,
                &config.vsa,
                &config.ekf_params(),
                &scenario.bounds,
            );
            (out.positions(), out.frames_coasted)
        }
    };
    let wall_time = started.elapsed().as_secs_f64();

    let mut per_frame_errors = Vec::with_capacity(positions.len());
    for (k, estimate) in positions.iter().enumerate() {
        let Some(est) = estimate else { continue };
        let t = k as f64 * scenario.cadence;
        if let Ok((truth, _)) = sample_state(&track, t) {
            per_frame_errors.push((*est - truth).norm());
        }
    }
    let rmse = rmse(&per_frame_errors)?;

    Ok(TrialResult {
        trial_seed: seed,
        per_frame_errors,
        rmse,
        wall_time,
        frames_coasted,
    })
}

/// Translates a trajectory so its first path point lands on `start`.
fn translated_to_start(spec: &TrajectorySpec, start: Point2) -> TrajectorySpec {
    let mut out = spec.clone();
    let shift = |anchor: Point2| start - anchor;
    match &mut out.shape {
        TrajectoryShape::Rhombus { center, .. }
        | TrajectoryShape::Circle { center, .. }
        | TrajectoryShape::Star { center, .. } => {
            let d = shift(*center);
            *center = *center + d;
        }
        TrajectoryShape::WaypointList { waypoints } => {
            let d = shift(waypoints[0]);
            for w in waypoints.iter_mut() {
                *w = *w + d;
            }
        }
    }
    out
}

/// All trials of all configured methods at one axis point.
pub fn run_methods_at(
    config: &ExperimentConfig,
    axis_index: usize,
) -> Result<Vec<(Method, Vec<TrialResult>)>, Error> {
    config
        .methods
        .iter()
        .map(|&method| {
            let trials: Result<Vec<TrialResult>, Error> = (0..config.n_trials)
                .into_par_iter()
                .map(|trial_index| run_trial(config, method, axis_index, trial_index))
                .collect();
            Ok((method, trials?))
        })
        .collect()
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// A sweep's aggregate table together with the trials behind every row.
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub table: SweepTable,
    /// Trials per (axis value, method), aligned with the table rows.
    pub trials: Vec<(f64, Method, Vec<TrialResult>)>,
}

/// Runs the configured sweep (or the single configured point when no sweep
/// axis is set), keeping per-trial results alongside the aggregates.
pub fn run_sweep_full(config: &ExperimentConfig) -> Result<SweepOutput, Error> {
    let (axis, values) = match &config.sweep {
        Some(sweep) => (sweep.axis, sweep.values.clone()),
        // Degenerate single-point "sweep" over the configured SNR.
        None => (SweepAxisName::SnrDb, vec![config.noise.snr_db]),
    };

    let mut rows = Vec::new();
    let mut all_trials = Vec::new();
    for (axis_index, &value) in values.iter().enumerate() {
        let cfg = config.with_axis_value(axis, value).validated()?;
        for (method, trials) in run_methods_at(&cfg, axis_index)? {
            let rmses: Vec<f64> = trials.iter().map(|t| t.rmse).collect();
            let times: Vec<f64> = trials.iter().map(|t| t.wall_time).collect();
            let (mean_rmse, std_rmse) = mean_std(&rmses);
            rows.push(SweepRow {
                axis_value: value,
                method,
                mean_rmse,
                std_rmse,
                mean_wall_time: times.iter().sum::<f64>() / times.len() as f64,
            });
            all_trials.push((value, method, trials));
        }
    }
    Ok(SweepOutput {
        table: SweepTable { axis, rows },
        trials: all_trials,
    })
}

/// Aggregate-only variant of [`run_sweep_full`].
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepTable, Error> {
    Ok(run_sweep_full(config)?.table)
}

// ─── Presets ─────────────────────────────────────────────────────────────────

/// Named experiment presets reproducing the simulated studies.
pub mod presets {
    use super::*;

    /// Dual 60 GHz radars at (2,0) and (0,2) m with a 10 ms trigger offset
    /// on radar 2, watching a 5 m x 6 m area at a 50 ms cadence.
    pub fn indoor_scenario(trajectory: TrajectorySpec, duration: f64) -> ScenarioConfig {
        ScenarioConfig {
            radar_positions: vec![Point2::new(2.0, 0.0), Point2::new(0.0, 2.0)],
            clock_offsets: vec![0.0, 0.010],
            waveform: WaveformParams::indoor_default(),
            trajectory,
            duration,
            bounds: RoomBounds::indoor_default(),
            cadence: 0.05,
            random_start_box: None,
        }
    }

    /// Constant-velocity descent from (1, 3) at (0, -1) m/s.
    pub fn line_trajectory() -> TrajectorySpec {
        TrajectorySpec::new(TrajectoryShape::WaypointList {
            waypoints: vec![Point2::new(1.0, 3.0), Point2::new(1.0, 1.5)],
        })
    }

    pub fn rhombus_trajectory() -> TrajectorySpec {
        TrajectorySpec::new(TrajectoryShape::Rhombus {
            center: Point2::new(2.5, 3.3),
            half_width: 1.2,
            half_height: 1.5,
        })
    }

    pub fn circle_trajectory() -> TrajectorySpec {
        TrajectorySpec::new(TrajectoryShape::Circle {
            center: Point2::new(2.5, 3.3),
            radius: 1.2,
        })
    }

    pub fn star_trajectory() -> TrajectorySpec {
        TrajectorySpec::new(TrajectoryShape::Star {
            center: Point2::new(2.5, 3.3),
            points: 5,
            outer_radius: 1.5,
            inner_radius: 0.6,
        })
    }

    fn base_config(scenario: ScenarioConfig, methods: Vec<Method>) -> ExperimentConfig {
        ExperimentConfig {
            scenario,
            methods,
            noise: NoiseModel::default(),
            vsa: VsaParams::default(),
            process_noise_spectral: 0.1,
            baseline_r_scale: 3.0,
            vsa_r_scale: 4.0,
            n_trials: 50,
            base_seed: 0xC0FFEE,
            sweep: None,
        }
    }

    /// Positioning study: random start positions, VSA vs raw trilateration.
    pub fn fig5() -> ExperimentConfig {
        let mut scenario = indoor_scenario(line_trajectory(), 1.5);
        scenario.random_start_box = Some([1.2, 3.2, 2.8, 4.0]);
        base_config(scenario, vec![Method::Trilateration, Method::Vsa])
    }

    /// SNR sweep 0..20 dB.
    pub fn fig6a() -> ExperimentConfig {
        let mut cfg = base_config(
            indoor_scenario(line_trajectory(), 1.5),
            vec![Method::EkfBaseline, Method::Vsa],
        );
        cfg.sweep = Some(SweepAxis {
            axis: SweepAxisName::SnrDb,
            values: vec![0.0, 5.0, 10.0, 15.0, 20.0],
        });
        cfg
    }

    /// Outlier-probability sweep 0..20%.
    pub fn fig6b() -> ExperimentConfig {
        let mut cfg = base_config(
            indoor_scenario(line_trajectory(), 1.5),
            vec![Method::EkfBaseline, Method::Vsa],
        );
        cfg.sweep = Some(SweepAxis {
            axis: SweepAxisName::OutlierProb,
            values: vec![0.0, 0.05, 0.10, 0.15, 0.20],
        });
        cfg
    }

    /// Inter-radar synchronization latency sweep 0..50 ms.
    pub fn fig6c() -> ExperimentConfig {
        let mut cfg = base_config(
            indoor_scenario(line_trajectory(), 1.5),
            vec![Method::EkfBaseline, Method::Vsa],
        );
        cfg.sweep = Some(SweepAxis {
            axis: SweepAxisName::ClockOffset,
            values: vec![0.0, 0.010, 0.025, 0.050],
        });
        cfg
    }

    /// Pulses-per-frame sweep at a fixed 50 ms fusion cadence; maneuvering
    /// trajectory so long integration windows pay their kinematic price.
    pub fn fig6d() -> ExperimentConfig {
        let mut cfg = base_config(
            indoor_scenario(rhombus_trajectory(), 20.0),
            vec![Method::EkfBaseline, Method::Vsa],
        );
        cfg.sweep = Some(SweepAxis {
            axis: SweepAxisName::NPri,
            values: vec![64.0, 128.0, 256.0, 512.0, 1024.0],
        });
        cfg
    }

    /// Grid-size sweep: accuracy/throughput trade.
    pub fn fig6e() -> ExperimentConfig {
        let mut cfg = base_config(
            indoor_scenario(line_trajectory(), 1.5),
            vec![Method::Vsa],
        );
        cfg.sweep = Some(SweepAxis {
            axis: SweepAxisName::GridPoints,
            values: vec![25.0, 50.0, 100.0, 200.0, 400.0],
        });
        cfg
    }

    pub fn table1_rhombus() -> ExperimentConfig {
        base_config(
            indoor_scenario(rhombus_trajectory(), 20.0),
            vec![Method::EkfBaseline, Method::Vsa],
        )
    }

    pub fn table1_circle() -> ExperimentConfig {
        base_config(
            indoor_scenario(circle_trajectory(), 20.0),
            vec![Method::EkfBaseline, Method::Vsa],
        )
    }

    pub fn table1_star() -> ExperimentConfig {
        base_config(
            indoor_scenario(star_trajectory(), 20.0),
            vec![Method::EkfBaseline, Method::Vsa],
        )
    }

    /// Looks up a preset by its public name.
    pub fn by_name(name: &str) -> Option<ExperimentConfig> {
        match name {
            "fig5" => Some(fig5()),
            "fig6a" => Some(fig6a()),
            "fig6b" => Some(fig6b()),
            "fig6c" => Some(fig6c()),
            "fig6d" => Some(fig6d()),
            "fig6e" => Some(fig6e()),
            "table1-rhombus" => Some(table1_rhombus()),
            "table1-circle" => Some(table1_circle()),
            "table1-star" => Some(table1_star()),
            _ => None,
        }
    }

    pub const NAMES: &[&str] = &[
        "fig5", "fig6a", "fig6b", "fig6c", "fig6d", "fig6e", "table1-rhombus", "table1-circle",
        "table1-star",
    ];
}
