//! Per-frame radar observable synthesis at two fidelity levels.
//!
//! [`synth_beat_frame`] generates the full complex beat-signal sample matrix
//! for one frame (the validation path through the DSP chain), while
//! [`measurement_channel`] is the fast measurement-level model used by the
//! Monte Carlo harness: resolution-scaled Gaussian noise on range and radial
//! velocity plus uniform outlier injection.
//!
//! Both are pure given an explicit RNG stream, so identical inputs and seeds
//! produce bit-identical outputs.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scenario::{RadarNode, WaveformParams, SPEED_OF_LIGHT};
use crate::types::{Point2, Vec2};

/// Noise and outlier configuration for one simulated channel.
///
/// `snr_db` is the post-2D-FFT peak signal-to-noise ratio; measurement noise
/// scales as resolution / sqrt(2 * SNR), the matched-filter bound form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Peak SNR after range-Doppler processing, dB. `f64::INFINITY` disables
    /// noise.
    pub snr_db: f64,
    /// Probability that a measurement is replaced by an outlier draw.
    pub outlier_prob: f64,
    /// Outlier ranges are drawn uniformly from [0, outlier_range_span] m.
    pub outlier_range_span: f64,
    /// Outlier radial velocities are drawn uniformly from +-span m/s.
    pub outlier_velocity_span: f64,
}

impl NoiseModel {
    pub fn new(snr_db: f64, outlier_prob: f64) -> Self {
        Self {
            snr_db,
            outlier_prob,
            ..Self::default()
        }
    }

    /// No noise, no outliers.
    pub fn noiseless() -> Self {
        Self {
            snr_db: f64::INFINITY,
            outlier_prob: 0.0,
            ..Self::default()
        }
    }

    pub fn validated(self) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&self.outlier_prob) {
            return Err(Error::InvalidConfig("outlier_prob must be in [0, 1]".into()));
        }
        if !(self.outlier_range_span > 0.0 && self.outlier_velocity_span > 0.0) {
            return Err(Error::InvalidConfig("outlier spans must be > 0".into()));
        }
        if self.snr_db.is_nan() {
            return Err(Error::InvalidConfig("snr_db must not be NaN".into()));
        }
        Ok(self)
    }

    pub fn snr_linear(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    /// Range noise standard deviation dR / sqrt(2 * SNR).
    pub fn sigma_range(&self, wf: &WaveformParams) -> f64 {
        if self.snr_db.is_infinite() {
            0.0
        } else {
            wf.range_resolution() / (2.0 * self.snr_linear()).sqrt()
        }
    }

    /// Radial-velocity noise standard deviation dv / sqrt(2 * SNR).
    pub fn sigma_velocity(&self, wf: &WaveformParams) -> f64 {
        if self.snr_db.is_infinite() {
            0.0
        } else {
            wf.velocity_resolution() / (2.0 * self.snr_linear()).sqrt()
        }
    }
}

impl Default for NoiseModel {
    /// The indoor simulation defaults: 10 dB SNR, 20% outliers.
    fn default() -> Self {
        Self {
            snr_db: 10.0,
            outlier_prob: 0.20,
            outlier_range_span: 6.0,
            outlier_velocity_span: 3.0,
        }
    }
}

/// One frame of complex beat-signal samples from one radar.
///
/// `samples` is fast-time major: sample (n, l) lives at `l * n_fast + n`.
#[derive(Clone, Debug)]
pub struct BeatFrame {
    pub radar_id: u8,
    pub frame_time: f64,
    /// Fast-time dimension N.
    pub n_fast: usize,
    /// Slow-time dimension L.
    pub n_slow: usize,
    pub samples: Vec<Complex64>,
    /// Received amplitude A.
    pub amplitude: f64,
    /// Constant phase term phi_0 = -2 pi f_c t_d - pi k t_d^2.
    pub initial_phase: f64,
}

impl BeatFrame {
    pub fn sample(&self, n: usize, l: usize) -> Complex64 {
        self.samples[l * self.n_fast + n]
    }

    /// All-zero frame with the waveform's dimensions.
    pub fn zeroed(radar_id: u8, wf: &WaveformParams) -> Self {
        Self {
            radar_id,
            frame_time: 0.0,
            n_fast: wf.samples_per_chirp,
            n_slow: wf.chirps_per_frame,
            samples: vec![Complex64::new(0.0, 0.0); wf.samples_per_chirp * wf.chirps_per_frame],
            amplitude: 0.0,
            initial_phase: 0.0,
        }
    }
}

/// Coherent and incoherent sums of the default Hann analysis window, used to
/// calibrate the injected noise power against the post-FFT peak SNR.
fn hann_sums(n: usize) -> (f64, f64) {
    let mut s = 0.0;
    let mut e = 0.0;
    for i in 0..n {
        let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos());
        s += w;
        e += w * w;
    }
    (s, e)
}

/// Synthesizes the analytic beat-signal frame for a point target.
///
/// Sample (n, l) is
/// `(A/2) exp(j (2 pi (k t_d - f_d) t_n + phi_0 + 2 pi f_d T_PRI l))`
/// plus complex white Gaussian noise. Positive radial velocity means a
/// receding target. The noise variance is calibrated so the range-Doppler
/// peak SNR under the default Hann/Hann analysis windows equals
/// `noise.snr_db`.
pub fn synth_beat_frame(
    radar: &RadarNode,
    target_position: Point2,
    target_radial_velocity: f64,
    noise: &NoiseModel,
    rng: &mut impl Rng,
) -> Result<BeatFrame, Error> {
    let wf = &radar.waveform;
    let range = (target_position - radar.position).norm();
    if range <= wf.range_resolution() {
        return Err(Error::TargetBehindRadar(range));
    }

    let amplitude = 1.0;
    let t_d = 2.0 * range / SPEED_OF_LIGHT;
    let k = wf.chirp_rate();
    let f_d = 2.0 * target_radial_velocity * wf.carrier_frequency / SPEED_OF_LIGHT;
    let phi0 = -2.0 * std::f64::consts::PI * wf.carrier_frequency * t_d
        - std::f64::consts::PI * k * t_d * t_d;
    let beat_freq = k * t_d - f_d;
    let phase_per_chirp = 2.0 * std::f64::consts::PI * f_d * wf.pri;

    let n_fast = wf.samples_per_chirp;
    let n_slow = wf.chirps_per_frame;
    let mut samples = Vec::with_capacity(n_fast * n_slow);
    let half_a = amplitude / 2.0;
    for l in 0..n_slow {
        let slow_phase = phi0 + phase_per_chirp * l as f64;
        for n in 0..n_fast {
            let t_n = n as f64 / wf.sample_rate;
            let phase = 2.0 * std::f64::consts::PI * beat_freq * t_n + slow_phase;
            samples.push(Complex64::from_polar(half_a, phase));
        }
    }

    if noise.snr_db.is_finite() {
        // Peak power after windowed 2D FFT is (A/2)^2 S1^2 S2^2 and the
        // per-bin noise power is sigma^2 E1 E2, so the per-sample complex
        // noise variance that yields the requested peak SNR is:
        let (s1, e1) = hann_sums(n_fast);
        let (s2, e2) = hann_sums(n_slow);
        let peak_power = half_a * half_a * s1 * s1 * s2 * s2;
        let sigma2 = peak_power / (e1 * e2 * noise.snr_linear());
        let per_component = (sigma2 / 2.0).sqrt();
        let normal = Normal::new(0.0, per_component).unwrap();
        for s in &mut samples {
            *s += Complex64::new(normal.sample(rng), normal.sample(rng));
        }
    }

    Ok(BeatFrame {
        radar_id: radar.id,
        frame_time: 0.0,
        n_fast,
        n_slow,
        samples,
        amplitude,
        initial_phase: phi0,
    })
}

/// One radar's post-detection measurement for a frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadarMeasurement {
    pub radar_id: u8,
    /// Nominal fusion-timeline stamp of the frame, seconds.
    pub frame_time: f64,
    /// Measured range, m.
    pub range: f64,
    /// Measured radial velocity, m/s; positive = receding.
    pub radial_velocity: f64,
    /// Diagnostics only: whether this measurement was an injected outlier.
    pub is_outlier: bool,
}

/// Coherent-integration smearing incurred by one measurement: extra range
/// noise from range-bin migration and extra velocity noise from the spread
/// of the radial velocity within the CPI window.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SmearEffects {
    pub sigma_range_extra: f64,
    pub sigma_velocity_extra: f64,
}

impl SmearEffects {
    /// Migration beyond half a range bin during the window smears the range
    /// estimate; velocity spread within the window smears the Doppler peak.
    pub fn from_window(
        wf: &WaveformParams,
        radial_displacement: f64,
        radial_velocity_std: f64,
    ) -> Self {
        let half_bin = 0.5 * wf.range_resolution();
        let excess = (radial_displacement.abs() - half_bin).max(0.0);
        Self {
            sigma_range_extra: excess / 12f64.sqrt(),
            sigma_velocity_extra: radial_velocity_std,
        }
    }
}

/// Fast measurement-level channel from known true range and radial velocity.
///
/// With probability `outlier_prob` the pair is replaced by uniform draws over
/// the outlier spans; otherwise Gaussian noise with the resolution-scaled
/// sigmas (plus any smearing contribution, in quadrature) is added. Outputs
/// are clamped to the unambiguous limits.
pub fn measurement_from_radial_smeared(
    radar: &RadarNode,
    frame_time: f64,
    true_range: f64,
    true_radial_velocity: f64,
    noise: &NoiseModel,
    smear: SmearEffects,
    rng: &mut impl Rng,
) -> RadarMeasurement {
    let wf = &radar.waveform;
    let sigma_r = noise.sigma_range(wf).hypot(smear.sigma_range_extra);
    let sigma_v = noise.sigma_velocity(wf).hypot(smear.sigma_velocity_extra);

    let noise_r = if sigma_r > 0.0 {
        Normal::new(0.0, sigma_r).unwrap().sample(rng)
    } else {
        0.0
    };
    let noise_v = if sigma_v > 0.0 {
        Normal::new(0.0, sigma_v).unwrap().sample(rng)
    } else {
        0.0
    };
    let is_outlier = noise.outlier_prob > 0.0 && rng.gen::<f64>() < noise.outlier_prob;

    let (range, radial_velocity) = if is_outlier {
        (
            rng.gen::<f64>() * noise.outlier_range_span,
            (rng.gen::<f64>() * 2.0 - 1.0) * noise.outlier_velocity_span,
        )
    } else {
        (true_range + noise_r, true_radial_velocity + noise_v)
    };

    let v_max = wf.max_unambiguous_velocity();
    RadarMeasurement {
        radar_id: radar.id,
        frame_time,
        range: range.clamp(0.0, wf.max_range()),
        radial_velocity: radial_velocity.clamp(-v_max, v_max),
        is_outlier,
    }
}

/// [`measurement_from_radial_smeared`] without any smearing contribution.
pub fn measurement_from_radial(
    radar: &RadarNode,
    frame_time: f64,
    true_range: f64,
    true_radial_velocity: f64,
    noise: &NoiseModel,
    rng: &mut impl Rng,
) -> RadarMeasurement {
    measurement_from_radial_smeared(
        radar,
        frame_time,
        true_range,
        true_radial_velocity,
        noise,
        SmearEffects::default(),
        rng,
    )
}

/// Fast measurement-level channel from a true target state.
///
/// Projects the velocity onto the line of sight (positive = receding) and
/// delegates to [`measurement_from_radial`]. A target exactly on the radar
/// measures zero radial velocity.
pub fn measurement_channel(
    radar: &RadarNode,
    frame_time: f64,
    position: Point2,
    velocity: Vec2,
    noise: &NoiseModel,
    rng: &mut impl Rng,
) -> RadarMeasurement {
    let offset = position - radar.position;
    let range = offset.norm();
    let v_radial = match offset.normalized() {
        Some(u) => velocity.dot(u),
        None => 0.0,
    };
    measurement_from_radial(radar, frame_time, range, v_radial, noise, rng)
}
