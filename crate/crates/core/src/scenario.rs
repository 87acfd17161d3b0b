//! Radar placement, waveform constants, trajectory generation, and the
//! inter-radar clock-offset model.
//!
//! Ground truth is produced on each radar's frame clock; radar 1 defines the
//! fusion timeline and the other radars' clock offsets model NTP trigger
//! error.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::types::{Point2, Vec2};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Chirp and frame constants of one radar.
///
/// All derived quantities (wavelength, range/Doppler resolution, unambiguous
/// limits) come from these fields; nothing else is stored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveformParams {
    /// Carrier frequency f_c in Hz.
    pub carrier_frequency: f64,
    /// Swept bandwidth B in Hz.
    pub bandwidth: f64,
    /// Single chirp duration tau in seconds.
    pub chirp_duration: f64,
    /// Fast-time samples per chirp (N).
    pub samples_per_chirp: usize,
    /// Chirps per frame (L, the number of integrated PRIs).
    pub chirps_per_frame: usize,
    /// Pulse repetition interval T_PRI in seconds.
    pub pri: f64,
    /// Frame repetition period in seconds.
    pub frame_period: f64,
    /// ADC sample rate in Hz.
    pub sample_rate: f64,
}

impl WaveformParams {
    /// The dual 60 GHz / 1.5 GHz indoor configuration: 50 ms frames with 256
    /// chirps filling the frame, 256 samples per chirp.
    pub fn indoor_default() -> Self {
        let frame_period = 50e-3;
        let chirps_per_frame = 256;
        let pri = frame_period / chirps_per_frame as f64;
        let samples_per_chirp = 256;
        Self {
            carrier_frequency: 60e9,
            bandwidth: 1.5e9,
            chirp_duration: pri,
            samples_per_chirp,
            chirps_per_frame,
            pri,
            frame_period,
            sample_rate: samples_per_chirp as f64 / pri,
        }
    }

    /// Checks the structural invariants, returning the validated value.
    pub fn validated(self) -> Result<Self, Error> {
        if !(self.carrier_frequency > 0.0) {
            return Err(Error::InvalidWaveform("carrier_frequency must be > 0"));
        }
        if !(self.bandwidth > 0.0) {
            return Err(Error::InvalidWaveform("bandwidth must be > 0"));
        }
        if !(self.chirp_duration > 0.0 && self.pri >= self.chirp_duration) {
            return Err(Error::InvalidWaveform("need 0 < chirp_duration <= pri"));
        }
        if self.samples_per_chirp < 2 || self.chirps_per_frame < 1 {
            return Err(Error::InvalidWaveform(
                "need samples_per_chirp >= 2 and chirps_per_frame >= 1",
            ));
        }
        // Allow a ulp of slack: pri is commonly frame_period / L.
        if self.chirps_per_frame as f64 * self.pri > self.frame_period * (1.0 + 1e-12) {
            return Err(Error::InvalidWaveform(
                "chirps_per_frame * pri must not exceed frame_period",
            ));
        }
        if !(self.sample_rate > 0.0) {
            return Err(Error::InvalidWaveform("sample_rate must be > 0"));
        }
        Ok(self)
    }

    /// Wavelength lambda = c / f_c.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Range resolution dR = c / (2 B).
    pub fn range_resolution(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth)
    }

    /// Chirp ramp rate k = B / tau.
    pub fn chirp_rate(&self) -> f64 {
        self.bandwidth / self.chirp_duration
    }

    /// Doppler (velocity) resolution dv = lambda / (2 L T_PRI).
    pub fn velocity_resolution(&self) -> f64 {
        self.wavelength() / (2.0 * self.chirps_per_frame as f64 * self.pri)
    }

    /// Maximum unambiguous radial speed lambda / (4 T_PRI).
    pub fn max_unambiguous_velocity(&self) -> f64 {
        self.wavelength() / (4.0 * self.pri)
    }

    /// Maximum unambiguous range N * dR.
    pub fn max_range(&self) -> f64 {
        self.samples_per_chirp as f64 * self.range_resolution()
    }

    /// Coherent processing interval L * T_PRI.
    pub fn cpi(&self) -> f64 {
        self.chirps_per_frame as f64 * self.pri
    }
}

/// One monostatic radar node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadarNode {
    pub id: u8,
    /// Position (x, y) in meters.
    pub position: Point2,
    pub waveform: WaveformParams,
    /// Signed trigger offset tau_sync in seconds relative to the fusion
    /// timeline. Zero for the master node; nonzero models NTP trigger error.
    pub clock_offset: f64,
}

impl RadarNode {
    pub fn new(id: u8, position: Point2, waveform: WaveformParams) -> Self {
        Self {
            id,
            position,
            waveform,
            clock_offset: 0.0,
        }
    }
}

/// Returns the physical trigger times of the first `n_frames` frames:
/// `k * frame_period + clock_offset`.
///
/// Downstream fusion indexes frames by `k` and assumes the offset is zero;
/// that assumption is exactly how synchronization latency corrupts results.
pub fn radar_frame_times(radar: &RadarNode, n_frames: usize) -> Vec<f64> {
    (0..n_frames)
        .map(|k| k as f64 * radar.waveform.frame_period + radar.clock_offset)
        .collect()
}

/// Shape of a reference trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TrajectoryShape {
    /// Rhombus with the given center and half-diagonals.
    Rhombus {
        center: Point2,
        half_width: f64,
        half_height: f64,
    },
    /// Circle traversed counterclockwise from angle 0.
    Circle { center: Point2, radius: f64 },
    /// Regular star polygon alternating outer/inner radius vertices.
    Star {
        center: Point2,
        points: usize,
        outer_radius: f64,
        inner_radius: f64,
    },
    /// Open polyline through explicit waypoints.
    WaypointList { waypoints: Vec<Point2> },
}

/// A reference trajectory: a shape plus its speed profile.
///
/// Speed along the path is `cruise_speed` except within `corner_blend_length`
/// of a vertex, where it ramps linearly down to `corner_speed` and back up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub shape: TrajectoryShape,
    /// Path speed away from corners, m/s.
    pub cruise_speed: f64,
    /// Path speed at a corner vertex, m/s.
    pub corner_speed: f64,
    /// Distance over which speed ramps near a corner, m.
    pub corner_blend_length: f64,
}

impl TrajectorySpec {
    pub fn new(shape: TrajectoryShape) -> Self {
        Self {
            shape,
            cruise_speed: 1.0,
            corner_speed: 0.3,
            corner_blend_length: 0.2,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        let speed_range = 0.2..=1.5;
        if !speed_range.contains(&self.cruise_speed) || !speed_range.contains(&self.corner_speed) {
            return Err(Error::InvalidTrajectory(
                "speeds must lie in [0.2, 1.5] m/s".into(),
            ));
        }
        if self.corner_speed > self.cruise_speed {
            return Err(Error::InvalidTrajectory(
                "corner_speed must not exceed cruise_speed".into(),
            ));
        }
        if self.corner_blend_length < 0.0 {
            return Err(Error::InvalidTrajectory(
                "corner_blend_length must be >= 0".into(),
            ));
        }
        match &self.shape {
            TrajectoryShape::Rhombus {
                half_width,
                half_height,
                ..
            } => {
                if *half_width <= 0.0 || *half_height <= 0.0 {
                    return Err(Error::InvalidTrajectory(
                        "rhombus half-diagonals must be > 0".into(),
                    ));
                }
            }
            TrajectoryShape::Circle { radius, .. } => {
                if *radius <= 0.0 {
                    return Err(Error::InvalidTrajectory("circle radius must be > 0".into()));
                }
            }
            TrajectoryShape::Star {
                points,
                outer_radius,
                inner_radius,
                ..
            } => {
                if *points < 3 {
                    return Err(Error::InvalidTrajectory(
                        "star needs at least 3 points".into(),
                    ));
                }
                if !(0.0 < *inner_radius && inner_radius < outer_radius) {
                    return Err(Error::InvalidTrajectory(
                        "star needs 0 < inner_radius < outer_radius".into(),
                    ));
                }
            }
            TrajectoryShape::WaypointList { waypoints } => {
                if waypoints.len() < 2 {
                    return Err(Error::InvalidTrajectory(
                        "waypoint list needs at least 2 points".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The polyline realizing the shape, plus whether it closes on itself.
    ///
    /// Closed shapes start at the midpoint of their first edge so every
    /// vertex lies in the interior of the traversal.
    fn polyline(&self) -> (Vec<Point2>, bool) {
        match &self.shape {
            TrajectoryShape::Rhombus {
                center,
                half_width,
                half_height,
            } => {
                let verts = vec![
                    Point2::new(center.x + half_width, center.y),
                    Point2::new(center.x, center.y + half_height),
                    Point2::new(center.x - half_width, center.y),
                    Point2::new(center.x, center.y - half_height),
                ];
                (close_from_edge_midpoint(&verts), true)
            }
            TrajectoryShape::Circle { center, radius } => {
                // Dense polygonal approximation; 1 mrad steps keep the chord
                // error below 1e-7 m for meter-scale radii.
                let n = 6284;
                let verts: Vec<Point2> = (0..n)
                    .map(|i| {
                        let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                        Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin())
                    })
                    .collect();
                let mut path = verts;
                path.push(path[0]);
                (path, true)
            }
            TrajectoryShape::Star {
                center,
                points,
                outer_radius,
                inner_radius,
            } => {
                let n = *points;
                let mut verts = Vec::with_capacity(2 * n);
                for i in 0..(2 * n) {
                    let r = if i % 2 == 0 {
                        *outer_radius
                    } else {
                        *inner_radius
                    };
                    let a =
                        std::f64::consts::PI / 2.0 + std::f64::consts::PI * i as f64 / n as f64;
                    verts.push(Point2::new(center.x + r * a.cos(), center.y + r * a.sin()));
                }
                (close_from_edge_midpoint(&verts), true)
            }
            TrajectoryShape::WaypointList { waypoints } => (waypoints.clone(), false),
        }
    }

    /// Corner vertices (points where speed should dip) as arc-length
    /// positions along the polyline returned by `polyline`.
    fn corner_arclengths(&self, path: &[Point2]) -> Vec<f64> {
        let cumulative = cumulative_arclength(path);
        match &self.shape {
            // The circle is smooth: no corners despite the dense polyline.
            TrajectoryShape::Circle { .. } => Vec::new(),
            // For polygonal shapes every interior polyline vertex is a corner.
            _ => (1..path.len() - 1).map(|i| cumulative[i]).collect(),
        }
    }
}

fn close_from_edge_midpoint(verts: &[Point2]) -> Vec<Point2> {
    let mid = Point2::new(
        0.5 * (verts[0].x + verts[1].x),
        0.5 * (verts[0].y + verts[1].y),
    );
    let mut path = vec![mid];
    path.extend_from_slice(&verts[1..]);
    path.push(verts[0]);
    path.push(mid);
    path
}

fn cumulative_arclength(path: &[Point2]) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len());
    let mut s = 0.0;
    out.push(0.0);
    for w in path.windows(2) {
        s += (w[1] - w[0]).norm();
        out.push(s);
    }
    out
}

/// Time-stamped ground-truth target states, uniformly sampled at the frame
/// period.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruthTrack {
    pub times: Vec<f64>,
    pub positions: Vec<Point2>,
    pub velocities: Vec<Vec2>,
}

impl GroundTruthTrack {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

/// Samples the trajectory every `frame_period` for one full traversal of the
/// shape (or `duration`, whichever ends first).
///
/// Closed shapes return to their start point; speed along the path follows
/// the trajectory's cruise/corner speed profile.
pub fn make_trajectory(
    spec: &TrajectorySpec,
    frame_period: f64,
    duration: f64,
) -> Result<GroundTruthTrack, Error> {
    if !(duration > 0.0) {
        return Err(Error::InvalidTrajectory("duration must be > 0".into()));
    }
    if !(frame_period > 0.0) {
        return Err(Error::InvalidTrajectory("frame_period must be > 0".into()));
    }
    spec.validate()?;

    // The circle is handled analytically so samples sit exactly on it.
    if let TrajectoryShape::Circle { center, radius } = &spec.shape {
        let circumference = 2.0 * std::f64::consts::PI * radius;
        let lap_time = circumference / spec.cruise_speed;
        let end = lap_time.min(duration);
        let n = (end / frame_period).floor() as usize + 1;
        let mut times = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        let mut velocities = Vec::with_capacity(n);
        for k in 0..n {
            let t = k as f64 * frame_period;
            let phi = spec.cruise_speed * t / radius;
            times.push(t);
            positions.push(Point2::new(
                center.x + radius * phi.cos(),
                center.y + radius * phi.sin(),
            ));
            velocities.push(Vec2::new(-phi.sin(), phi.cos()) * spec.cruise_speed);
        }
        return Ok(GroundTruthTrack {
            times,
            positions,
            velocities,
        });
    }

    let (path, _closed) = spec.polyline();
    let cumulative = cumulative_arclength(&path);
    let total_length = *cumulative.last().unwrap();
    let corners = spec.corner_arclengths(&path);

    let speed_at = |s: f64| -> f64 {
        let mut v = spec.cruise_speed;
        if spec.corner_blend_length > 0.0 {
            for &c in &corners {
                let d = (s - c).abs();
                if d < spec.corner_blend_length {
                    let ramp = spec.corner_speed
                        + (spec.cruise_speed - spec.corner_speed) * d / spec.corner_blend_length;
                    v = v.min(ramp);
                }
            }
        }
        v
    };

    // March arc length against time with small fixed steps; midpoint speed
    // keeps the integration error far below the 1e-6 m/s velocity tolerance.
    let ds = 1e-4f64;
    let mut samples_t = Vec::new();
    let mut samples_s = Vec::new();
    let mut t = 0.0f64;
    let mut s = 0.0f64;
    let mut next_sample = 0.0f64;
    loop {
        while next_sample <= t + 1e-15 && next_sample <= duration + 1e-15 {
            samples_t.push(next_sample);
            samples_s.push(s.min(total_length));
            next_sample = frame_period * samples_t.len() as f64;
        }
        if s >= total_length || t >= duration || next_sample > duration + 1e-15 {
            break;
        }
        let step = ds.min(total_length - s);
        let v_mid = speed_at(s + 0.5 * step);
        let t_next = t + step / v_mid;
        // Emit any sample instants crossed inside this step.
        while next_sample < t_next - 1e-15 && next_sample <= duration + 1e-15 {
            let frac = (next_sample - t) / (t_next - t);
            samples_t.push(next_sample);
            samples_s.push(s + frac * step);
            next_sample = frame_period * samples_t.len() as f64;
        }
        s += step;
        t = t_next;
    }

    let mut positions = Vec::with_capacity(samples_s.len());
    let mut velocities = Vec::with_capacity(samples_s.len());
    for &si in &samples_s {
        let (p, dir) = point_on_path(&path, &cumulative, si);
        positions.push(p);
        velocities.push(dir * speed_at(si));
    }

    Ok(GroundTruthTrack {
        times: samples_t,
        positions,
        velocities,
    })
}

/// Position and unit tangent direction at arc length `s` along the polyline.
fn point_on_path(path: &[Point2], cumulative: &[f64], s: f64) -> (Point2, Vec2) {
    let total = *cumulative.last().unwrap();
    let s = s.clamp(0.0, total);
    let idx = match cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
        Ok(i) => i.min(cumulative.len() - 2),
        Err(i) => i.saturating_sub(1).min(cumulative.len() - 2),
    };
    let seg_len = cumulative[idx + 1] - cumulative[idx];
    let dir = if seg_len > 0.0 {
        (path[idx + 1] - path[idx]) * (1.0 / seg_len)
    } else {
        Vec2::new(0.0, 0.0)
    };
    let p = path[idx] + dir * (s - cumulative[idx]);
    (p, dir)
}

/// Piecewise-linear interpolation of the track state at time `t`.
///
/// Exact sample instants return the stored sample; interior times return the
/// linear interpolation with the enclosing segment's finite-difference
/// velocity.
pub fn sample_state(track: &GroundTruthTrack, t: f64) -> Result<(Point2, Vec2), Error> {
    if track.is_empty() {
        return Err(Error::TimeOutOfRange(t));
    }
    let (t0, t1) = (track.start_time(), track.end_time());
    if t < t0 - 1e-12 || t > t1 + 1e-12 {
        return Err(Error::TimeOutOfRange(t));
    }
    if track.times.len() == 1 {
        return Ok((track.positions[0], track.velocities[0]));
    }
    let dt = track.times[1] - track.times[0];
    let k = (((t - t0) / dt).floor() as usize).min(track.times.len() - 1);
    if (t - track.times[k]).abs() < 1e-12 {
        return Ok((track.positions[k], track.velocities[k]));
    }
    let k = k.min(track.times.len() - 2);
    let frac = (t - track.times[k]) / (track.times[k + 1] - track.times[k]);
    let p0 = track.positions[k];
    let p1 = track.positions[k + 1];
    let p = Point2::new(p0.x + frac * (p1.x - p0.x), p0.y + frac * (p1.y - p0.y));
    let v = (p1 - p0) * (1.0 / (track.times[k + 1] - track.times[k]));
    Ok((p, v))
}
