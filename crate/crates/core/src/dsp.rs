//! Range-profile and range-Doppler-map computation with windowing,
//! cell-averaging CFAR detection in one and two dimensions, and conversion
//! from bin indices to physical units.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scenario::{WaveformParams, SPEED_OF_LIGHT};
use crate::signal::{BeatFrame, RadarMeasurement};

/// Analysis window applied before the DFT.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Rectangular,
    #[default]
    Hann,
    Hamming,
}

impl Window {
    pub fn coefficient(&self, i: usize, n: usize) -> f64 {
        let phase = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        match self {
            Window::Rectangular => 1.0,
            Window::Hann => 0.5 * (1.0 - phase.cos()),
            Window::Hamming => 0.54 - 0.46 * phase.cos(),
        }
    }
}

/// Magnitude spectrum over fast time: one range bin per sample index.
#[derive(Clone, Debug)]
pub struct RangeProfile {
    pub magnitudes: Vec<f64>,
    /// Range extent of one bin, m.
    pub bin_width: f64,
}

/// Magnitude of the 2D DFT over one frame, Doppler axis FFT-shifted so that
/// `zero_doppler_index` is the zero-velocity column.
#[derive(Clone, Debug)]
pub struct RangeDopplerMap {
    /// Flat row-major magnitudes: entry (m, q) at `m * n_doppler + q`.
    pub magnitudes: Vec<f64>,
    pub n_range: usize,
    pub n_doppler: usize,
    pub range_bin_width: f64,
    pub velocity_bin_width: f64,
    pub zero_doppler_index: usize,
}

impl RangeDopplerMap {
    pub fn magnitude(&self, range_bin: usize, doppler_idx: usize) -> f64 {
        self.magnitudes[range_bin * self.n_doppler + doppler_idx]
    }

    /// Signed Doppler bin for a shifted column index.
    pub fn signed_doppler(&self, doppler_idx: usize) -> i64 {
        doppler_idx as i64 - self.zero_doppler_index as i64
    }
}

/// CA-CFAR configuration.
///
/// `n_ref` and `n_guard` are counts per side; the scaling factor comes from
/// the closed form `alpha = N (pfa^(-1/N) - 1)` with N the reference cells
/// actually available, or from `threshold_db` directly when set (the
/// fixed-threshold parameterization used by COTS radar front ends).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfarParams {
    /// Reference cells per side.
    pub n_ref: usize,
    /// Guard cells per side.
    pub n_guard: usize,
    /// Desired probability of false alarm.
    pub pfa: f64,
    /// Analysis window for both FFT axes.
    pub window: Window,
    /// Optional fixed scaling factor expressed in dB; overrides `pfa`.
    pub threshold_db: Option<f64>,
}

impl CfarParams {
    pub fn validated(self) -> Result<Self, Error> {
        if self.n_ref < 1 {
            return Err(Error::InvalidConfig("cfar n_ref must be >= 1".into()));
        }
        if !(self.pfa > 0.0 && self.pfa < 1.0) {
            return Err(Error::InvalidConfig("cfar pfa must be in (0, 1)".into()));
        }
        Ok(self)
    }

    /// Threshold scaling factor for a reference window of `n_used` cells.
    fn alpha(&self, n_used: usize) -> f64 {
        match self.threshold_db {
            Some(db) => 10f64.powf(db / 10.0),
            None => {
                let n = n_used as f64;
                n * (self.pfa.powf(-1.0 / n) - 1.0)
            }
        }
    }
}

impl Default for CfarParams {
    fn default() -> Self {
        Self {
            n_ref: 8,
            n_guard: 2,
            pfa: 1e-3,
            window: Window::Hann,
            threshold_db: None,
        }
    }
}

/// One CFAR detection cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellDetection {
    pub range_bin: usize,
    /// Signed Doppler bin; zero for 1D (static) detections.
    pub doppler_bin: i64,
    pub cell_power: f64,
    /// 10 log10(cell power / reference mean power).
    pub estimated_snr: f64,
}

fn fft_in_place(planner: &mut FftPlanner<f64>, data: &mut [Complex64]) {
    planner.plan_fft_forward(data.len()).process(data);
}

/// Windowed magnitude DFT over fast time of chirp 0: the static-path range
/// profile. Energy is conserved per Parseval up to the window gain.
pub fn range_profile(frame: &BeatFrame, wf: &WaveformParams, window: Window) -> RangeProfile {
    let n = frame.n_fast;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|i| frame.sample(i, 0) * window.coefficient(i, n))
        .collect();
    let mut planner = FftPlanner::new();
    fft_in_place(&mut planner, &mut buf);
    RangeProfile {
        magnitudes: buf.iter().map(|c| c.norm()).collect(),
        bin_width: wf.range_resolution(),
    }
}

/// Windowed 2D magnitude DFT of the frame with the Doppler axis shifted so
/// the zero-velocity column sits at `n_slow / 2`.
pub fn range_doppler_map(
    frame: &BeatFrame,
    wf: &WaveformParams,
    fast_window: Window,
    slow_window: Window,
) -> RangeDopplerMap {
    let n = frame.n_fast;
    let l = frame.n_slow;
    let mut planner = FftPlanner::new();

    // Fast-time FFT per chirp.
    let mut stage: Vec<Complex64> = Vec::with_capacity(n * l);
    let mut buf = vec![Complex64::default(); n];
    for chirp in 0..l {
        for (i, slot) in buf.iter_mut().enumerate() {
            *slot = frame.sample(i, chirp) * fast_window.coefficient(i, n);
        }
        fft_in_place(&mut planner, &mut buf);
        stage.extend_from_slice(&buf);
    }

    // Slow-time FFT per range bin, then shift.
    let shift = l.div_ceil(2);
    let zero_doppler_index = l / 2;
    let mut magnitudes = vec![0.0; n * l];
    let mut slow = vec![Complex64::default(); l];
    for range_bin in 0..n {
        for chirp in 0..l {
            slow[chirp] = stage[chirp * n + range_bin] * slow_window.coefficient(chirp, l);
        }
        fft_in_place(&mut planner, &mut slow);
        for q in 0..l {
            magnitudes[range_bin * l + q] = slow[(q + shift) % l].norm();
        }
    }

    RangeDopplerMap {
        magnitudes,
        n_range: n,
        n_doppler: l,
        range_bin_width: wf.range_resolution(),
        velocity_bin_width: wf.velocity_resolution(),
        zero_doppler_index,
    }
}

/// 1D cell-averaging CFAR over the range profile.
///
/// The cell under test is declared when its power exceeds `alpha * Z`, with
/// `Z` the mean power of the reference cells (guard cells excluded). Edge
/// cells fall back to one-sided reference windows with `alpha` recomputed for
/// the cells actually available.
pub fn cfar_1d(profile: &RangeProfile, params: &CfarParams) -> Result<Vec<CellDetection>, Error> {
    let n = profile.magnitudes.len();
    if n <= 2 * (params.n_ref + params.n_guard) + 1 {
        return Err(Error::ProfileTooShort);
    }
    let power: Vec<f64> = profile.magnitudes.iter().map(|m| m * m).collect();
    let mut detections = Vec::new();
    for cut in 0..n {
        let mut sum = 0.0;
        let mut count = 0usize;
        for side in [-1i64, 1] {
            for k in 1..=params.n_ref {
                let idx = cut as i64 + side * (params.n_guard + k) as i64;
                if idx >= 0 && (idx as usize) < n {
                    sum += power[idx as usize];
                    count += 1;
                }
            }
        }
        if count == 0 {
            continue;
        }
        let z = sum / count as f64;
        let alpha = params.alpha(count);
        if power[cut] > alpha * z {
            let snr = if z > 0.0 {
                10.0 * (power[cut] / z).log10()
            } else {
                f64::INFINITY
            };
            detections.push(CellDetection {
                range_bin: cut,
                doppler_bin: 0,
                cell_power: power[cut],
                estimated_snr: snr,
            });
        }
    }
    sort_by_power(&mut detections);
    Ok(detections)
}

/// 2D cell-averaging CFAR over the range-Doppler map: a square reference
/// ring around a square guard region, detections sorted by descending power.
pub fn cfar_2d(map: &RangeDopplerMap, params: &CfarParams) -> Result<Vec<CellDetection>, Error> {
    let span = 2 * (params.n_ref + params.n_guard) + 1;
    if map.n_range <= span || map.n_doppler <= span {
        return Err(Error::MapTooSmall);
    }
    let reach = (params.n_ref + params.n_guard) as i64;
    let guard = params.n_guard as i64;
    let mut detections = Vec::new();
    for m in 0..map.n_range {
        for q in 0..map.n_doppler {
            let mut sum = 0.0;
            let mut count = 0usize;
            for dm in -reach..=reach {
                for dq in -reach..=reach {
                    if dm.abs().max(dq.abs()) <= guard {
                        continue;
                    }
                    let rm = m as i64 + dm;
                    let rq = q as i64 + dq;
                    if rm < 0 || rq < 0 || rm as usize >= map.n_range || rq as usize >= map.n_doppler
                    {
                        continue;
                    }
                    let mag = map.magnitude(rm as usize, rq as usize);
                    sum += mag * mag;
                    count += 1;
                }
            }
            if count == 0 {
                continue;
            }
            let z = sum / count as f64;
            let mag = map.magnitude(m, q);
            let cell_power = mag * mag;
            let alpha = params.alpha(count);
            if cell_power > alpha * z {
                let snr = if z > 0.0 {
                    10.0 * (cell_power / z).log10()
                } else {
                    f64::INFINITY
                };
                detections.push(CellDetection {
                    range_bin: m,
                    doppler_bin: map.signed_doppler(q),
                    cell_power,
                    estimated_snr: snr,
                });
            }
        }
    }
    sort_by_power(&mut detections);
    Ok(detections)
}

/// Descending power; ties broken by lower range bin, then lower |Doppler|.
fn sort_by_power(detections: &mut [CellDetection]) {
    detections.sort_by(|a, b| {
        b.cell_power
            .partial_cmp(&a.cell_power)
            .unwrap()
            .then(a.range_bin.cmp(&b.range_bin))
            .then(a.doppler_bin.abs().cmp(&b.doppler_bin.abs()))
    });
}

/// Range of bin `m`: r = c m / (2 B).
pub fn bin_to_range(m: usize, wf: &WaveformParams) -> f64 {
    SPEED_OF_LIGHT * m as f64 / (2.0 * wf.bandwidth)
}

/// Radial velocity of signed Doppler bin `p`: v = lambda p / (2 L T_PRI).
pub fn bin_to_velocity(p: i64, wf: &WaveformParams) -> f64 {
    wf.wavelength() * p as f64 / (2.0 * wf.chirps_per_frame as f64 * wf.pri)
}

/// Runs the 2D chain on one frame and converts the strongest CFAR detection
/// to a range and radial-velocity measurement (single-target assumption).
pub fn detect_target(
    frame: &BeatFrame,
    wf: &WaveformParams,
    params: &CfarParams,
) -> Result<RadarMeasurement, Error> {
    let map = range_doppler_map(frame, wf, params.window, params.window);
    let detections = cfar_2d(&map, params)?;
    let best = detections.first().ok_or(Error::NoDetection)?;
    Ok(RadarMeasurement {
        radar_id: frame.radar_id,
        frame_time: frame.frame_time,
        range: bin_to_range(best.range_bin, wf),
        radial_velocity: bin_to_velocity(best.doppler_bin, wf),
        is_outlier: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::RadarNode;
    use crate::signal::{synth_beat_frame, NoiseModel};
    use crate::types::Point2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::Distribution;

    fn radar() -> RadarNode {
        RadarNode::new(1, Point2::new(0.0, 0.0), WaveformParams::indoor_default())
    }

    fn noiseless_frame(range: f64, v_radial: f64) -> BeatFrame {
        let r = radar();
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        synth_beat_frame(
            &r,
            Point2::new(range, 0.0),
            v_radial,
            &NoiseModel::noiseless(),
            &mut rng,
        )
        .unwrap()
    }

    fn argmax(values: &[f64]) -> usize {
        values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn zero_frame_gives_zero_profile() {
        let frame = BeatFrame::zeroed(1, &WaveformParams::indoor_default());
        let profile = range_profile(&frame, &WaveformParams::indoor_default(), Window::Hann);
        assert!(profile.magnitudes.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn tone_at_two_meters_peaks_at_bin_twenty() {
        let frame = noiseless_frame(2.0, 0.0);
        let profile = range_profile(&frame, &WaveformParams::indoor_default(), Window::Hann);
        assert_eq!(argmax(&profile.magnitudes[..128]), 20);
    }

    #[test]
    fn window_choice_preserves_peak_bin() {
        let frame = noiseless_frame(2.0, 0.0);
        let rect = range_profile(&frame, &WaveformParams::indoor_default(), Window::Rectangular);
        let hann = range_profile(&frame, &WaveformParams::indoor_default(), Window::Hann);
        assert_eq!(
            argmax(&rect.magnitudes[..128]),
            argmax(&hann.magnitudes[..128])
        );
    }

    #[test]
    fn range_profile_parseval() {
        let frame = noiseless_frame(3.0, 0.0);
        let n = frame.n_fast;
        let windowed_energy: f64 = (0..n)
            .map(|i| {
                let w = Window::Hann.coefficient(i, n);
                (frame.sample(i, 0) * w).norm_sqr()
            })
            .sum();
        let profile = range_profile(&frame, &WaveformParams::indoor_default(), Window::Hann);
        let spectrum_energy: f64 = profile.magnitudes.iter().map(|m| m * m).sum();
        assert!(
            (spectrum_energy - n as f64 * windowed_energy).abs() / spectrum_energy < 1e-9,
            "Parseval violated"
        );
    }

    #[test]
    fn static_target_concentrates_in_zero_velocity_column() {
        // Rectangular slow-time window: a static target has no slow-time
        // phase rotation, so all Doppler energy lands exactly on bin 0.
        let frame = noiseless_frame(3.0, 0.0);
        let map = range_doppler_map(&frame, &WaveformParams::indoor_default(), Window::Hann, Window::Rectangular);
        let zero_col_energy: f64 = (0..map.n_range)
            .map(|m| map.magnitude(m, map.zero_doppler_index).powi(2))
            .sum();
        let total: f64 = map.magnitudes.iter().map(|m| m * m).sum();
        assert!(zero_col_energy / total > 0.999999);
    }

    #[test]
    fn moving_target_peaks_at_expected_cell() {
        // r = 3.0 m -> bin 30; v = +0.5 m/s -> Doppler bin +10 with the
        // 60 GHz 256x256 waveform.
        let frame = noiseless_frame(3.0, 0.5);
        let map = range_doppler_map(&frame, &WaveformParams::indoor_default(), Window::Hann, Window::Hann);
        let flat_idx = argmax(&map.magnitudes);
        let m = flat_idx / map.n_doppler;
        let q = flat_idx % map.n_doppler;
        assert_eq!(m, 30);
        assert_eq!(map.signed_doppler(q), 10);
    }

    #[test]
    fn real_input_gives_symmetric_doppler_spectrum() {
        let mut frame = noiseless_frame(3.0, 0.5);
        for s in &mut frame.samples {
            *s = Complex64::new(s.re, 0.0);
        }
        let map = range_doppler_map(&frame, &WaveformParams::indoor_default(), Window::Hann, Window::Hann);
        // Conjugate symmetry of the 2D DFT of a real signal:
        // |X[-m, -p]| = |X[m, p]|.
        let peak = map.magnitudes.iter().cloned().fold(0.0f64, f64::max);
        let n = map.n_range;
        let l = map.n_doppler;
        for m in (0..n).step_by(17) {
            for q in 1..l {
                let m_neg = (n - m) % n;
                let q_neg = 2 * map.zero_doppler_index - q;
                if q_neg >= l {
                    continue;
                }
                let a = map.magnitude(m, q);
                let b = map.magnitude(m_neg, q_neg);
                assert!((a - b).abs() <= 1e-9 * peak, "asymmetry at m={m} q={q}");
            }
        }
    }

    #[test]
    fn rdm_is_linear_in_amplitude() {
        let frame = noiseless_frame(3.0, 0.5);
        let mut scaled = frame.clone();
        for s in &mut scaled.samples {
            *s *= 2.5;
        }
        let base = range_doppler_map(&frame, &WaveformParams::indoor_default(), Window::Hann, Window::Hann);
        let big = range_doppler_map(&scaled, &WaveformParams::indoor_default(), Window::Hann, Window::Hann);
        let peak = big.magnitudes.iter().cloned().fold(0.0f64, f64::max);
        for (a, b) in base.magnitudes.iter().zip(&big.magnitudes) {
            assert!((b - 2.5 * a).abs() <= 1e-9 * peak);
        }
    }

    #[test]
    fn cfar_1d_threshold_arithmetic() {
        // Flat unit-power profile: Z = 1. With alpha pinned to 3, a CUT of
        // power 4 is detected and power 2 is not.
        let params = CfarParams {
            threshold_db: Some(10.0 * 3f64.log10()),
            ..CfarParams::default()
        };
        let mut mags = vec![1.0; 64];
        mags[30] = 2.0; // power 4
        let dets = cfar_1d(
            &RangeProfile {
                magnitudes: mags,
                bin_width: 0.1,
            },
            &params,
        )
        .unwrap();
        assert_eq!(dets.len(), 1);
        assert_eq!(dets[0].range_bin, 30);

        let mut mags = vec![1.0; 64];
        mags[30] = 2f64.sqrt(); // power 2
        let dets = cfar_1d(
            &RangeProfile {
                magnitudes: mags,
                bin_width: 0.1,
            },
            &params,
        )
        .unwrap();
        assert!(dets.is_empty());
    }

    #[test]
    fn cfar_1d_zero_profile_no_detections() {
        let profile = RangeProfile {
            magnitudes: vec![0.0; 128],
            bin_width: 0.1,
        };
        let dets = cfar_1d(&profile, &CfarParams::default()).unwrap();
        assert!(dets.is_empty());
    }

    #[test]
    fn cfar_1d_profile_too_short() {
        let profile = RangeProfile {
            magnitudes: vec![1.0; 8],
            bin_width: 0.1,
        };
        assert_eq!(
            cfar_1d(&profile, &CfarParams::default()),
            Err(Error::ProfileTooShort)
        );
    }

    #[test]
    fn cfar_1d_false_alarm_rate_calibrated() {
        // Exponential cell powers (complex-Gaussian magnitudes), pfa = 1e-2,
        // 1e5 cells: the empirical rate must sit within a factor of 2.
        let pfa = 1e-2;
        let params = CfarParams {
            pfa,
            ..CfarParams::default()
        };
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 100_000;
        let mags: Vec<f64> = (0..n)
            .map(|_| {
                let re: f64 = rand_distr::StandardNormal.sample(&mut rng);
                let im: f64 = rand_distr::StandardNormal.sample(&mut rng);
                (re * re + im * im).sqrt() * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        let dets = cfar_1d(
            &RangeProfile {
                magnitudes: mags,
                bin_width: 0.1,
            },
            &params,
        )
        .unwrap();
        let rate = dets.len() as f64 / n as f64;
        assert!(
            rate >= 0.5 * pfa && rate <= 2.0 * pfa,
            "false alarm rate {rate} vs configured {pfa}"
        );
    }

    #[test]
    fn cfar_2d_zero_map_and_peaks() {
        let zero = RangeDopplerMap {
            magnitudes: vec![0.0; 64 * 64],
            n_range: 64,
            n_doppler: 64,
            range_bin_width: 0.1,
            velocity_bin_width: 0.05,
            zero_doppler_index: 32,
        };
        let params = CfarParams {
            pfa: 1e-3,
            ..CfarParams::default()
        };
        assert!(cfar_2d(&zero, &params).unwrap().is_empty());

        // Single peak 20 dB above a flat unit floor.
        let mut map = zero.clone();
        for m in &mut map.magnitudes {
            *m = 1.0;
        }
        map.magnitudes[20 * 64 + 40] = 10.0;
        let dets = cfar_2d(&map, &params).unwrap();
        assert_eq!(dets.len(), 1);
        assert_eq!(dets[0].range_bin, 20);
        assert_eq!(dets[0].doppler_bin, 40 - 32);
        assert!((dets[0].estimated_snr - 20.0).abs() < 0.5);

        // Two well-separated peaks, stronger first.
        map.magnitudes[50 * 64 + 10] = 30.0;
        let dets = cfar_2d(&map, &params).unwrap();
        assert_eq!(dets.len(), 2);
        assert_eq!(dets[0].range_bin, 50);
        assert_eq!(dets[1].range_bin, 20);
    }

    #[test]
    fn cfar_2d_map_too_small() {
        let tiny = RangeDopplerMap {
            magnitudes: vec![1.0; 8 * 8],
            n_range: 8,
            n_doppler: 8,
            range_bin_width: 0.1,
            velocity_bin_width: 0.05,
            zero_doppler_index: 4,
        };
        assert_eq!(
            cfar_2d(&tiny, &CfarParams::default()),
            Err(Error::MapTooSmall)
        );
    }

    #[test]
    fn bin_conversions() {
        let wf = WaveformParams::indoor_default();
        assert_eq!(bin_to_range(0, &wf), 0.0);
        assert_eq!(bin_to_range(30, &wf), SPEED_OF_LIGHT * 30.0 / 3e9);
        assert!((bin_to_range(30, &wf) - 3.0).abs() < 2.5e-3);
        assert!((bin_to_range(1, &wf) - 0.10).abs() < 1e-3);

        assert_eq!(bin_to_velocity(0, &wf), 0.0);
        assert!((bin_to_velocity(1, &wf) - 0.05).abs() < 1e-4);
        assert!((bin_to_velocity(-20, &wf) - (-1.0)).abs() < 1e-3);
        // Linearity.
        let diff = bin_to_velocity(-20, &wf) - (-20.0 * bin_to_velocity(1, &wf));
        assert!(diff.abs() < 1e-12);
    }

    #[test]
    fn detect_target_noiseless_quantization_bound() {
        let wf = WaveformParams::indoor_default();
        let frame = noiseless_frame(3.0, 0.5);
        let m = detect_target(&frame, &wf, &CfarParams::default()).unwrap();
        assert!((m.range - 3.0).abs() <= wf.range_resolution() / 2.0);
        assert!((m.radial_velocity - 0.5).abs() <= wf.velocity_resolution() / 2.0);
    }

    #[test]
    fn detect_target_zero_frame_is_no_detection() {
        let wf = WaveformParams::indoor_default();
        let frame = BeatFrame::zeroed(1, &wf);
        assert_eq!(
            detect_target(&frame, &wf, &CfarParams::default()),
            Err(Error::NoDetection)
        );
    }

    fn detection_rate(snr_db: f64, frames: usize, seed: u64) -> f64 {
        // Pd oracle: the fraction of frames in which the CFAR fires within
        // one cell of the true (range, Doppler) location.
        let r = radar();
        let wf = r.waveform;
        let noise = NoiseModel::new(snr_db, 0.0);
        let params = CfarParams::default();
        // On-bin target: range exactly bin 30, velocity exactly bin 10.
        let range = bin_to_range(30, &wf);
        let velocity = bin_to_velocity(10, &wf);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut hits = 0;
        for _ in 0..frames {
            let frame =
                synth_beat_frame(&r, Point2::new(range, 0.0), velocity, &noise, &mut rng).unwrap();
            let map = range_doppler_map(&frame, &wf, params.window, params.window);
            let dets = cfar_2d(&map, &params).unwrap();
            if dets
                .iter()
                .any(|d| d.range_bin.abs_diff(30) <= 1 && (d.doppler_bin - 10).abs() <= 1)
            {
                hits += 1;
            }
        }
        hits as f64 / frames as f64
    }

    #[test]
    fn cfar_detection_rate_follows_detection_curves() {
        // Classical single-pulse detection: Pd = 0.99 needs roughly 13.5 dB
        // at these false-alarm rates; 10 dB sits near Pd = 0.8.
        let at_14 = detection_rate(14.0, 100, 123);
        assert!(at_14 >= 0.99, "detection rate at 14 dB: {at_14}");
        let at_10 = detection_rate(10.0, 100, 124);
        assert!(at_10 >= 0.75, "detection rate at 10 dB: {at_10}");
    }
}
