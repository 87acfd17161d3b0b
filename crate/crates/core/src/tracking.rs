//! Target state estimation: the constant-velocity EKF baseline and the
//! velocity-synthesis-assisted (VSA) grid estimator whose geometry-validated
//! output feeds the EKF update.
//!
//! A tracker instance is a single-target state machine driven by one logical
//! thread; distinct instances are independent. Everything is deterministic
//! given its inputs.

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{
    project_velocity, resolve_ambiguity, synthesize_velocity_lstsq, trilaterate, RoomBounds,
};
use crate::scenario::RadarNode;
use crate::signal::RadarMeasurement;
use crate::types::{Point2, Vec2};

// ─── EKF ─────────────────────────────────────────────────────────────────────

/// Filter state: x = [p_x, p_y, v_x, v_y] with covariance P.
#[derive(Clone, Debug, PartialEq)]
pub struct EkfState {
    pub x: Vector4<f64>,
    pub p: Matrix4<f64>,
}

impl EkfState {
    pub fn new(position: Point2, velocity: Vec2, p_diag: [f64; 4]) -> Self {
        Self {
            x: Vector4::new(position.x, position.y, velocity.x, velocity.y),
            p: Matrix4::from_diagonal(&Vector4::from(p_diag)),
        }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x[0], self.x[1])
    }

    pub fn velocity(&self) -> Vec2 {
        Vec2::new(self.x[2], self.x[3])
    }

    /// Smallest eigenvalue of P (symmetric by maintenance).
    pub fn min_covariance_eigenvalue(&self) -> f64 {
        self.p.symmetric_eigen().eigenvalues.min()
    }
}

/// Process/measurement noise configuration for the filter.
#[derive(Clone, Debug, PartialEq)]
pub struct EkfParams {
    /// Process noise covariance.
    pub q: Matrix4<f64>,
    /// Measurement covariance for the range-pair observation.
    pub r_range_pair: Matrix2<f64>,
    /// Measurement covariance for the direct position+velocity observation.
    pub r_full: Matrix4<f64>,
    /// Prediction interval, s.
    pub dt: f64,
}

impl EkfParams {
    /// Discrete white-noise-acceleration Q for spectral density `q_tilde`
    /// (m^2/s^3) and measurement covariances derived from the channel sigmas:
    /// diag(sigma_r^2) for ranges, twice the sigma-derived variances for the
    /// fused position/velocity observation.
    pub fn from_sigmas(q_tilde: f64, sigma_r: f64, sigma_v: f64, dt: f64) -> Self {
        let dt2 = dt * dt;
        let dt3 = dt2 * dt;
        let dt4 = dt3 * dt;
        #[rustfmt::skip]
        let q = Matrix4::new(
            dt4 / 4.0, 0.0,       dt3 / 2.0, 0.0,
            0.0,       dt4 / 4.0, 0.0,       dt3 / 2.0,
            dt3 / 2.0, 0.0,       dt2,       0.0,
            0.0,       dt3 / 2.0, 0.0,       dt2,
        ) * q_tilde;
        // Floor at a 1 um / 1 um/s noise scale so exact (noiseless)
        // measurements still yield an invertible innovation covariance.
        let var_r = (sigma_r * sigma_r).max(1e-12);
        let var_v = (sigma_v * sigma_v).max(1e-12);
        Self {
            q,
            r_range_pair: Matrix2::from_diagonal(&Vector2::new(var_r, var_r)),
            r_full: Matrix4::from_diagonal(&Vector4::new(
                2.0 * var_r,
                2.0 * var_r,
                2.0 * var_v,
                2.0 * var_v,
            )),
            dt,
        }
    }
}

/// Symmetrize and floor the eigenvalues of P at zero. Significant negative
/// eigenvalues indicate a filter bug, checked in debug builds.
fn enforce_psd(p: &mut Matrix4<f64>) {
    *p = (*p + p.transpose()) * 0.5;
    let eig = p.symmetric_eigen();
    let min = eig.eigenvalues.min();
    debug_assert!(min >= -1e-9, "covariance lost PSD: min eigenvalue {min}");
    if min < 0.0 {
        let mut vals = eig.eigenvalues;
        for v in vals.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        *p = eig.eigenvectors * Matrix4::from_diagonal(&vals) * eig.eigenvectors.transpose();
        *p = (*p + p.transpose()) * 0.5;
    }
}

/// Constant-velocity prediction: x <- F x, P <- F P F' + Q.
pub fn ekf_predict(state: &EkfState, params: &EkfParams) -> EkfState {
    let dt = params.dt;
    #[rustfmt::skip]
    let f = Matrix4::new(
        1.0, 0.0, dt,  0.0,
        0.0, 1.0, 0.0, dt,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    );
    let x = f * state.x;
    let mut p = f * state.p * f.transpose() + params.q;
    enforce_psd(&mut p);
    EkfState { x, p }
}

/// Observation models supported by the update step.
#[derive(Clone, Debug)]
pub enum Observation {
    /// Ranges to two radars: h_i(x) = |p - r_i|, Jacobian rows are the LoS
    /// unit vectors on the position components.
    RangePair {
        radar_positions: [Point2; 2],
        ranges: [f64; 2],
    },
    /// Direct position observation: H = [I2 0].
    Position { z: Point2 },
    /// Direct position+velocity observation: H = I4.
    Full { position: Point2, velocity: Vec2 },
}

fn update_generic<const M: usize>(
    state: &EkfState,
    innovation: SMatrix<f64, M, 1>,
    h: SMatrix<f64, M, 4>,
    r: SMatrix<f64, M, M>,
) -> Result<EkfState, Error> {
    let s = h * state.p * h.transpose() + r;
    let s_inv = s.try_inverse().ok_or(Error::SingularInnovation)?;
    let k = state.p * h.transpose() * s_inv;
    let x = state.x + k * innovation;
    // Joseph form keeps P symmetric PSD under roundoff.
    let ikh = Matrix4::identity() - k * h;
    let mut p = ikh * state.p * ikh.transpose() + k * r * k.transpose();
    enforce_psd(&mut p);
    Ok(EkfState { x, p })
}

/// Standard EKF update for the given observation.
///
/// `r_scale` inflates the measurement covariance (1.0 = nominal); the VSA
/// fallback path passes 10.
pub fn ekf_update(
    state: &EkfState,
    observation: &Observation,
    params: &EkfParams,
    r_scale: f64,
) -> Result<EkfState, Error> {
    match observation {
        Observation::RangePair {
            radar_positions,
            ranges,
        } => {
            let p_est = state.position();
            let mut h = SMatrix::<f64, 2, 4>::zeros();
            let mut innovation = Vector2::zeros();
            for (i, (rp, z)) in radar_positions.iter().zip(ranges).enumerate() {
                let offset = p_est - *rp;
                let range = offset.norm();
                if range < 1e-9 {
                    return Err(Error::ZeroRange);
                }
                let u = offset * (1.0 / range);
                h[(i, 0)] = u.x;
                h[(i, 1)] = u.y;
                innovation[i] = z - range;
            }
            update_generic(state, innovation, h, params.r_range_pair * r_scale)
        }
        Observation::Position { z } => {
            let mut h = SMatrix::<f64, 2, 4>::zeros();
            h[(0, 0)] = 1.0;
            h[(1, 1)] = 1.0;
            let innovation = Vector2::new(z.x - state.x[0], z.y - state.x[1]);
            let r = params.r_full.fixed_view::<2, 2>(0, 0).into_owned() * r_scale;
            update_generic(state, innovation, h, r)
        }
        Observation::Full { position, velocity } => {
            let h = Matrix4::identity();
            let innovation = Vector4::new(
                position.x - state.x[0],
                position.y - state.x[1],
                velocity.x - state.x[2],
                velocity.y - state.x[3],
            );
            update_generic(state, innovation, h, params.r_full * r_scale)
        }
    }
}

// ─── VSA estimator ───────────────────────────────────────────────────────────

/// Velocity-synthesis-assisted estimator configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VsaParams {
    /// Range-gate half-width around each measured range, m.
    pub delta: f64,
    /// Total grid points covering the candidate region's bounding box.
    pub grid_points: usize,
    /// Velocity-magnitude consistency threshold, m/s.
    pub eps_d: f64,
    /// Velocity-angle consistency threshold, rad.
    pub eps_theta: f64,
    /// Weight of the radial-velocity residual in the position cost.
    pub residual_velocity_weight: f64,
    /// Kinematic confinement radius around the track prediction, m: the
    /// target cannot leave this neighbourhood within one frame, so candidate
    /// regions (and fallback fixes) farther away are rejected as ghosts.
    pub prior_gate: f64,
}

impl Default for VsaParams {
    fn default() -> Self {
        Self {
            delta: 0.10,
            grid_points: 100,
            eps_d: 0.15,
            eps_theta: 15f64.to_radians(),
            residual_velocity_weight: 0.01,
            prior_gate: 0.55,
        }
    }
}

impl VsaParams {
    pub fn validated(self) -> Result<Self, Error> {
        if !(self.delta > 0.0) {
            return Err(Error::InvalidConfig("vsa delta must be > 0".into()));
        }
        if self.grid_points < 4 {
            return Err(Error::InvalidConfig("vsa grid_points must be >= 4".into()));
        }
        if !(self.eps_d > 0.0) {
            return Err(Error::InvalidConfig("vsa eps_d must be > 0".into()));
        }
        if !(self.eps_theta > 0.0 && self.eps_theta < std::f64::consts::PI) {
            return Err(Error::InvalidConfig(
                "vsa eps_theta must be in (0, pi)".into(),
            ));
        }
        if !(self.prior_gate > 0.0) {
            return Err(Error::InvalidConfig("vsa prior_gate must be > 0".into()));
        }
        Ok(self)
    }
}

/// Track prediction used to confine the candidate region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackPrior {
    pub position: Point2,
    /// Maximum plausible distance from the prediction, m.
    pub gate_radius: f64,
}

/// Geometry-validated state estimate produced by the VSA search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VsaEstimate {
    /// Back-projected position at the previous frame: p_now - v * dt.
    pub position_prev: Point2,
    pub position_now: Point2,
    pub velocity: Vec2,
    /// Number of grid points that passed the consistency check.
    pub candidate_count: usize,
    /// Mean composite inconsistency of the winning point's radar pairs.
    pub mean_inconsistency: f64,
    /// Lattice index of the winning grid point (row-major over the grid).
    pub argmin_index: usize,
}

/// The uniform search lattice over the candidate region's bounding box.
#[derive(Clone, Debug)]
pub struct VsaGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Lattice points inside the annulus intersection, with their row-major
    /// lattice index (`iy * xs.len() + ix`).
    pub points: Vec<(usize, Point2)>,
}

impl VsaGrid {
    /// Diagonal of one grid cell, the spatial quantization of the search.
    pub fn cell_diagonal(&self) -> f64 {
        let dx = if self.xs.len() > 1 {
            self.xs[1] - self.xs[0]
        } else {
            0.0
        };
        let dy = if self.ys.len() > 1 {
            self.ys[1] - self.ys[0]
        } else {
            0.0
        };
        dx.hypot(dy)
    }
}

fn inside_annuli(p: Point2, radars: &[RadarNode], gates: &[(f64, f64)], tol: f64) -> bool {
    radars.iter().zip(gates).all(|(radar, (lo, hi))| {
        let r = (p - radar.position).norm();
        r >= lo - tol && r <= hi + tol
    })
}

/// Builds the candidate-region grid for the given now-measurements.
///
/// The region is the intersection of the per-radar annuli
/// `[range - delta, range + delta]`, clipped to the surveillance bounds when
/// given. Bounds matter with two radars: the annulus intersection has a
/// mirror lobe across the radar baseline that radial measurements alone
/// cannot reject. The region's exact bounding box is found from the
/// boundary-circle intersections and the axis-extreme points of each boundary
/// circle; the lattice spans that box with roughly sqrt(M) points per side,
/// keeping those inside the region.
pub fn vsa_grid(
    meas_now: &[RadarMeasurement],
    radars: &[RadarNode],
    params: &VsaParams,
    bounds: Option<&RoomBounds>,
    prior: Option<TrackPrior>,
) -> Result<VsaGrid, Error> {
    assert_eq!(meas_now.len(), radars.len());
    let gates: Vec<(f64, f64)> = meas_now
        .iter()
        .map(|m| ((m.range - params.delta).max(0.0), m.range + params.delta))
        .collect();

    // With two radars the annulus intersection mirrors across the radar
    // baseline; a track prior selects the physical lobe and confines the
    // search to the kinematically reachable neighbourhood. Points near the
    // baseline stay in regardless (the lobes merge there).
    let baseline_side = |p: Point2| -> f64 {
        let along = radars[1].position - radars[0].position;
        along.cross(p - radars[0].position)
    };
    let prior_side = prior.map(|g| baseline_side(g.position));
    let lobe_ok = |p: Point2| -> bool {
        match (radars.len(), prior_side) {
            (2, Some(side)) if side.abs() > 1e-9 => {
                let s = baseline_side(p);
                s * side >= 0.0 || s.abs() < 1e-9
            }
            _ => true,
        }
    };
    let gate_ok = |p: Point2| -> bool {
        prior.is_none_or(|g| (p - g.position).norm() <= g.gate_radius)
    };
    let in_bounds =
        |p: Point2| bounds.is_none_or(|b| b.contains(p)) && lobe_ok(p) && gate_ok(p);

    // Candidate extreme points of the region boundary.
    let mut candidates: Vec<Point2> = Vec::new();
    let circles: Vec<(Point2, f64)> = radars
        .iter()
        .zip(&gates)
        .flat_map(|(radar, (lo, hi))| [(radar.position, *lo), (radar.position, *hi)])
        .collect();
    for (i, &(c1, r1)) in circles.iter().enumerate() {
        candidates.extend([
            Point2::new(c1.x + r1, c1.y),
            Point2::new(c1.x - r1, c1.y),
            Point2::new(c1.x, c1.y + r1),
            Point2::new(c1.x, c1.y - r1),
        ]);
        for &(c2, r2) in circles.iter().skip(i + 1) {
            if (c1 - c2).norm() < 1e-12 || r1 <= 0.0 || r2 <= 0.0 {
                continue;
            }
            if let Ok(pair) = trilaterate(r1, r2, c1, c2) {
                candidates.extend(pair);
            }
        }
    }
    // Bound edges can also delimit the region: add the bound corners and the
    // crossings of every gate circle with the bound lines.
    if let Some(b) = bounds {
        candidates.extend([
            Point2::new(b.x_min, b.y_min),
            Point2::new(b.x_min, b.y_max),
            Point2::new(b.x_max, b.y_min),
            Point2::new(b.x_max, b.y_max),
        ]);
        for &(c, r) in &circles {
            for x in [b.x_min, b.x_max] {
                let dx = x - c.x;
                if dx.abs() <= r {
                    let dy = (r * r - dx * dx).sqrt();
                    candidates.push(Point2::new(x, c.y + dy));
                    candidates.push(Point2::new(x, c.y - dy));
                }
            }
            for y in [b.y_min, b.y_max] {
                let dy = y - c.y;
                if dy.abs() <= r {
                    let dx = (r * r - dy * dy).sqrt();
                    candidates.push(Point2::new(c.x + dx, y));
                    candidates.push(Point2::new(c.x - dx, y));
                }
            }
        }
    }
    candidates.retain(|&p| inside_annuli(p, radars, &gates, 1e-9) && in_bounds(p));
    if candidates.is_empty() {
        return Err(Error::EmptyRegion);
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for p in &candidates {
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        y_min = y_min.min(p.y);
        y_max = y_max.max(p.y);
    }

    let side = ((params.grid_points as f64).sqrt().round() as usize).max(2);
    let linspace = |lo: f64, hi: f64| -> Vec<f64> {
        (0..side)
            .map(|i| lo + (hi - lo) * i as f64 / (side - 1) as f64)
            .collect()
    };
    let xs = linspace(x_min, x_max);
    let ys = linspace(y_min, y_max);

    let mut points = Vec::new();
    for (iy, &y) in ys.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let p = Point2::new(x, y);
            if inside_annuli(p, radars, &gates, 1e-9) && in_bounds(p) {
                points.push((iy * side + ix, p));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(VsaGrid { xs, ys, points })
}

/// Angle between two velocity vectors, defined as zero when either is
/// (near-)zero so static targets stay consistent.
pub fn velocity_angle(a: Vec2, b: Vec2) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na < 1e-6 || nb < 1e-6 {
        return 0.0;
    }
    (a.dot(b) / (na * nb)).clamp(-1.0, 1.0).acos()
}

/// Composite inconsistency of one synthesized velocity pair.
fn pair_inconsistency(delta_d: f64, delta_theta: f64, params: &VsaParams) -> f64 {
    delta_d + (params.eps_d / params.eps_theta) * delta_theta
}

struct CandidateEval {
    lattice_index: usize,
    cost: f64,
    velocity: Vec2,
    mean_inconsistency: f64,
}

/// Evaluates one grid point: consistency over all radar pairs, then the
/// weighted velocity and the range/velocity residual cost. `None` when any
/// pair fails a threshold or the geometry degenerates.
fn evaluate_candidate(
    point: Point2,
    lattice_index: usize,
    meas_prev: &[RadarMeasurement],
    meas_now: &[RadarMeasurement],
    radars: &[RadarNode],
    params: &VsaParams,
) -> Option<CandidateEval> {
    let n = radars.len();
    let mut weighted_velocity = Vec2::new(0.0, 0.0);
    let mut weight_sum = 0.0;
    let mut inconsistency_sum = 0.0;
    let mut pair_count = 0usize;

    for i in 0..n {
        for j in (i + 1)..n {
            let pair_pos = [radars[i].position, radars[j].position];
            let prev_speeds = [meas_prev[i].radial_velocity, meas_prev[j].radial_velocity];
            let now_speeds = [meas_now[i].radial_velocity, meas_now[j].radial_velocity];
            let v0 = synthesize_velocity_lstsq(point, &pair_pos, &prev_speeds).ok()?;
            let vt = synthesize_velocity_lstsq(point, &pair_pos, &now_speeds).ok()?;
            let delta_d = (v0.norm() - vt.norm()).abs();
            let delta_theta = velocity_angle(v0, vt);
            if delta_d > params.eps_d || delta_theta > params.eps_theta {
                return None;
            }
            let inconsistency = pair_inconsistency(delta_d, delta_theta, params);
            let w = 1.0 / (inconsistency + 1e-6);
            weighted_velocity = weighted_velocity + vt * w;
            weight_sum += w;
            inconsistency_sum += inconsistency;
            pair_count += 1;
        }
    }
    if pair_count == 0 {
        return None;
    }

    let velocity = weighted_velocity * (1.0 / weight_sum);
    let mut cost = 0.0;
    for (radar, m) in radars.iter().zip(meas_now) {
        let offset = point - radar.position;
        let range = offset.norm();
        let dr = range - m.range;
        cost += dr * dr;
        if params.residual_velocity_weight > 0.0 {
            if let Some(u) = offset.normalized() {
                let dv = project_velocity(velocity, u) - m.radial_velocity;
                cost += params.residual_velocity_weight * dv * dv;
            }
        }
    }

    Some(CandidateEval {
        lattice_index,
        cost,
        velocity,
        mean_inconsistency: inconsistency_sum / pair_count as f64,
    })
}

/// The VSA search over one frame pair.
///
/// Gates a grid to the annulus intersection of the now-ranges, synthesizes
/// per-pair velocities from the previous and current radial speeds at every
/// grid point, keeps points whose velocity pairs stay consistent, and picks
/// the consistent point minimizing the range/velocity residual. The velocity
/// is the inconsistency-weighted average at the winning point, and the
/// previous position is back-projected so that
/// `position_now = position_prev + velocity * dt` holds exactly.
pub fn vsa_estimate(
    meas_prev: &[RadarMeasurement],
    meas_now: &[RadarMeasurement],
    radars: &[RadarNode],
    params: &VsaParams,
    bounds: Option<&RoomBounds>,
    prior: Option<TrackPrior>,
) -> Result<VsaEstimate, Error> {
    assert!(radars.len() >= 2, "vsa needs at least two radars");
    assert_eq!(meas_prev.len(), radars.len());
    assert_eq!(meas_now.len(), radars.len());
    let dt = meas_now[0].frame_time - meas_prev[0].frame_time;
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(
            "vsa needs meas_now after meas_prev".into(),
        ));
    }

    let grid = vsa_grid(meas_now, radars, params, bounds, prior)?;
    let mut best: Option<CandidateEval> = None;
    let mut survivors = 0usize;
    for &(lattice_index, point) in &grid.points {
        if let Some(eval) =
            evaluate_candidate(point, lattice_index, meas_prev, meas_now, radars, params)
        {
            survivors += 1;
            let better = match &best {
                None => true,
                Some(b) => eval.cost < b.cost,
            };
            if better {
                best = Some(eval);
            }
        }
    }
    let best = best.ok_or(Error::EmptyCandidateSet)?;

    let side = grid.xs.len();
    let position_now = Point2::new(
        grid.xs[best.lattice_index % side],
        grid.ys[best.lattice_index / side],
    );
    let velocity = best.velocity;
    Ok(VsaEstimate {
        position_prev: position_now - velocity * dt,
        position_now,
        velocity,
        candidate_count: survivors,
        mean_inconsistency: best.mean_inconsistency,
        argmin_index: best.lattice_index,
    })
}

// ─── Frame-stream trackers ───────────────────────────────────────────────────

/// Per-frame tracker output over a measurement stream.
#[derive(Clone, Debug, Default)]
pub struct TrackerOutput {
    /// One entry per frame; `None` before initialization.
    pub states: Vec<Option<EkfState>>,
    /// True where the frame produced no usable measurement (predict only).
    pub coasted: Vec<bool>,
    pub frames_coasted: usize,
}

impl TrackerOutput {
    pub fn positions(&self) -> Vec<Option<Point2>> {
        self.states
            .iter()
            .map(|s| s.as_ref().map(|s| s.position()))
            .collect()
    }
}

/// Initial covariance after the trilateration bootstrap.
const INIT_P_DIAG: [f64; 4] = [1.0, 1.0, 1.0, 1.0];

/// Base agreement distance for track confirmation: one frame of target
/// motion plus geometric amplification of nominal range noise.
const INIT_AGREE_GATE: f64 = 0.25;

/// Consecutive agreements required to confirm a track (three fixes).
const INIT_AGREEMENTS: usize = 2;

/// Agreement gate matched to the filter's own range-noise belief so tracks
/// can still be born in low-SNR regimes.
fn init_gate_for(params: &EkfParams) -> f64 {
    let sigma_r = params.r_range_pair[(0, 0)].sqrt();
    INIT_AGREE_GATE.max(0.1 + 2.0 * sigma_r)
}

/// Escalation schedule for acquisition: unconfirmed frames after which the
/// required agreement count drops from two to one, and then to zero (lone
/// fix, last resort; the drop/reacquire machinery bounds a bad one).
const INIT_ESCALATE_TO_PAIR: usize = 6;
const INIT_ESCALATE_TO_SINGLE: usize = 14;

/// Trilateration bootstrap requiring consecutive agreeing fixes.
struct InitConfirmer {
    pending: Option<Point2>,
    agreements: usize,
    gate: f64,
    frames_seen: usize,
}

impl Default for InitConfirmer {
    fn default() -> Self {
        Self::with_gate(INIT_AGREE_GATE)
    }
}

impl InitConfirmer {
    fn with_gate(gate: f64) -> Self {
        Self {
            pending: None,
            agreements: 0,
            gate,
            frames_seen: 0,
        }
    }

    fn agreements_needed(&self) -> usize {
        if self.frames_seen > INIT_ESCALATE_TO_SINGLE {
            0
        } else if self.frames_seen > INIT_ESCALATE_TO_PAIR {
            1
        } else {
            INIT_AGREEMENTS
        }
    }

    /// Feeds one frame; returns the confirmed initial position once enough
    /// consecutive fixes agree (fewer as acquisition escalates).
    fn offer(
        &mut self,
        frame: &[Option<RadarMeasurement>],
        radars: &[RadarNode],
        bounds: &RoomBounds,
    ) -> Option<Point2> {
        self.frames_seen += 1;
        let fix = (|| {
            let m0 = frame[0].as_ref()?;
            let m1 = frame[1].as_ref()?;
            let candidates =
                trilaterate(m0.range, m1.range, radars[0].position, radars[1].position).ok()?;
            resolve_ambiguity(&candidates, bounds, self.pending).ok()
        })();
        let Some(fix) = fix else {
            self.pending = None;
            self.agreements = 0;
            return None;
        };
        match self.pending {
            Some(prev) if (fix - prev).norm() <= self.gate => {
                self.agreements += 1;
                self.pending = Some(fix);
            }
            _ => {
                self.pending = Some(fix);
                self.agreements = 0;
            }
        }
        if self.agreements >= self.agreements_needed() {
            Some(fix)
        } else {
            None
        }
    }
}

/// Runs the VSA-fed EKF over a frame-aligned measurement stream.
///
/// Per frame: predict, then try the VSA estimate over the consecutive frame
/// pair and update with the full position+velocity observation. When every
/// candidate fails consistency, fall back to trilateration as a position-only
/// measurement with the covariance inflated tenfold; when the candidate
/// region is empty or a detection is missing, coast.
pub fn track_vsa(
    measurements: &[Vec<Option<RadarMeasurement>>],
    radars: &[RadarNode],
    vsa_params: &VsaParams,
    ekf_params: &EkfParams,
    bounds: &RoomBounds,
) -> TrackerOutput {
    /// Frames without any usable update before the track is dropped and
    /// re-acquired from scratch.
    const MAX_COAST_STREAK: usize = 5;

    let mut out = TrackerOutput::default();
    let mut state: Option<EkfState> = None;
    let mut confirmer = InitConfirmer::with_gate(init_gate_for(ekf_params));
    let mut coast_streak = 0usize;

    for k in 0..measurements.len() {
        let frame = &measurements[k];
        let Some(prev_state) = state.take() else {
            let init = confirmer
                .offer(frame, radars, bounds)
                .map(|p| EkfState::new(p, Vec2::new(0.0, 0.0), INIT_P_DIAG));
            let coasted = init.is_none();
            if coasted {
                out.frames_coasted += 1;
            }
            out.coasted.push(coasted);
            out.states.push(init.clone());
            state = init;
            continue;
        };

        let predicted = ekf_predict(&prev_state, ekf_params);
        // The gate widens (within limits) while coasting so a displaced
        // track can reacquire.
        let prior = TrackPrior {
            position: predicted.position(),
            gate_radius: vsa_params.prior_gate * (1.0 + coast_streak.min(3) as f64),
        };
        let mut updated: Option<EkfState> = None;

        let frames_complete = k > 0
            && frame.iter().all(Option::is_some)
            && measurements[k - 1].iter().all(Option::is_some);
        if frames_complete {
            let now: Vec<RadarMeasurement> = frame.iter().map(|m| m.unwrap()).collect();
            let prev: Vec<RadarMeasurement> =
                measurements[k - 1].iter().map(|m| m.unwrap()).collect();
            match vsa_estimate(&prev, &now, radars, vsa_params, Some(bounds), Some(prior)) {
                Ok(est) => {
                    let obs = Observation::Full {
                        position: est.position_now,
                        velocity: est.velocity,
                    };
                    updated = ekf_update(&predicted, &obs, ekf_params, 1.0).ok();
                }
                Err(Error::EmptyCandidateSet) => {
                    // Geometry still constrains position: trilaterate and
                    // update with a deweighted position observation, still
                    // subject to the kinematic gate.
                    if let Ok(cands) = trilaterate(
                        now[0].range,
                        now[1].range,
                        radars[0].position,
                        radars[1].position,
                    ) {
                        if let Ok(p) = resolve_ambiguity(&cands, bounds, Some(prior.position)) {
                            if (p - prior.position).norm() <= prior.gate_radius {
                                let obs = Observation::Position { z: p };
                                updated = ekf_update(&predicted, &obs, ekf_params, 10.0).ok();
                            }
                        }
                    }
                }
                Err(_) => {}
            }
        }

        let coasted = updated.is_none();
        if coasted {
            out.frames_coasted += 1;
            coast_streak += 1;
        } else {
            coast_streak = 0;
        }
        let next = updated.unwrap_or(predicted);
        out.coasted.push(coasted);
        out.states.push(Some(next.clone()));
        // A track that cannot find support for this long is lost; drop it
        // and re-acquire instead of chasing a runaway prediction.
        // Re-acquisition starts pre-escalated (two agreeing fixes suffice).
        if coast_streak >= MAX_COAST_STREAK {
            state = None;
            confirmer = InitConfirmer::with_gate(init_gate_for(ekf_params));
            confirmer.frames_seen = INIT_ESCALATE_TO_PAIR;
            coast_streak = 0;
        } else {
            state = Some(next);
        }
    }
    out
}

/// The conventional baseline: EKF updated directly with the measured range
/// pair every frame, no outlier handling.
pub fn track_ekf_baseline(
    measurements: &[Vec<Option<RadarMeasurement>>],
    radars: &[RadarNode],
    ekf_params: &EkfParams,
    bounds: &RoomBounds,
) -> TrackerOutput {
    let mut out = TrackerOutput::default();
    let mut state: Option<EkfState> = None;
    let mut confirmer = InitConfirmer::with_gate(init_gate_for(ekf_params));

    for frame in measurements {
        let Some(prev_state) = state.take() else {
            let init = confirmer
                .offer(frame, radars, bounds)
                .map(|p| EkfState::new(p, Vec2::new(0.0, 0.0), INIT_P_DIAG));
            let coasted = init.is_none();
            if coasted {
                out.frames_coasted += 1;
            }
            out.coasted.push(coasted);
            out.states.push(init.clone());
            state = init;
            continue;
        };

        let predicted = ekf_predict(&prev_state, ekf_params);
        let mut updated: Option<EkfState> = None;
        if let (Some(m0), Some(m1)) = (&frame[0], &frame[1]) {
            let obs = Observation::RangePair {
                radar_positions: [radars[0].position, radars[1].position],
                ranges: [m0.range, m1.range],
            };
            updated = ekf_update(&predicted, &obs, ekf_params, 1.0).ok();
        }

        let coasted = updated.is_none();
        if coasted {
            out.frames_coasted += 1;
        }
        let next = updated.unwrap_or(predicted);
        out.coasted.push(coasted);
        out.states.push(Some(next.clone()));
        state = Some(next);
    }
    out
}

/// Frame-by-frame trilateration with ambiguity resolution against the last
/// accepted estimate: the raw positioning baseline.
///
/// A fix is accepted only when it sits within a velocity-feasibility gate of
/// the previous accepted fix (the gate widens across skipped frames); frames
/// with no intersection, no in-bounds candidate, or an infeasible jump yield
/// no estimate.
pub fn track_trilateration(
    measurements: &[Vec<Option<RadarMeasurement>>],
    radars: &[RadarNode],
    bounds: &RoomBounds,
) -> Vec<Option<Point2>> {
    const FEASIBILITY_GATE: f64 = 0.5;
    let mut confirmer = InitConfirmer::default();
    let mut previous: Option<Point2> = None;
    let mut skips = 0usize;
    measurements
        .iter()
        .map(|frame| {
            let Some(prev) = previous else {
                let confirmed = confirmer.offer(frame, radars, bounds);
                previous = confirmed;
                return confirmed;
            };
            let fix = (|| {
                let m0 = frame[0]?;
                let m1 = frame[1]?;
                let cands =
                    trilaterate(m0.range, m1.range, radars[0].position, radars[1].position)
                        .ok()?;
                resolve_ambiguity(&cands, bounds, Some(prev)).ok()
            })();
            match fix {
                Some(p) if (p - prev).norm() <= FEASIBILITY_GATE * (1.0 + skips as f64) => {
                    skips = 0;
                    previous = Some(p);
                    Some(p)
                }
                _ => {
                    skips += 1;
                    None
                }
            }
        })
        .collect()
}
