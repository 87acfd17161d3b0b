//! Closed-form trilateration with ambiguity resolution, line-of-sight
//! projection, and velocity-vector synthesis from radial projections.
//!
//! Sign conventions, fixed here and used everywhere else:
//! - radial velocity is positive for a receding target (range increasing);
//! - the perpendicular in the synthesis formula is the 90-degrees-clockwise
//!   rotation (x, y) -> (y, -x) in a y-up frame.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::types::{Point2, Vec2};

/// Rectangular surveillance area used to reject mirror solutions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoomBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl RoomBounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, Error> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidConfig(
                "room bounds need x_min < x_max and y_min < y_max".into(),
            ));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// The 5 m x 6 m central measurement area.
    pub fn indoor_default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 5.0,
            y_min: 0.0,
            y_max: 6.0,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }
}

/// A radial velocity observation in vector form: signed magnitude along a
/// unit line-of-sight direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialVelocityVector {
    /// Signed radial speed v_i (positive = receding).
    pub magnitude: f64,
    /// Unit LoS direction u_i from radar to target.
    pub unit_direction: Vec2,
}

impl RadialVelocityVector {
    pub fn new(magnitude: f64, unit_direction: Vec2) -> Self {
        debug_assert!((unit_direction.norm() - 1.0).abs() < 1e-9);
        Self {
            magnitude,
            unit_direction,
        }
    }

    /// The projected vector v_i * u_i.
    pub fn as_vector(&self) -> Vec2 {
        self.unit_direction * self.magnitude
    }
}

/// Both intersection points of the two range circles centered on the radars.
///
/// Returns one point twice when the circles are tangent. Errors when the
/// circles are disjoint or nested (negative discriminant) or the radar
/// positions coincide.
pub fn trilaterate(
    r1: f64,
    r2: f64,
    radar1_pos: Point2,
    radar2_pos: Point2,
) -> Result<[Point2; 2], Error> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::NoIntersection);
    }
    let base = radar2_pos - radar1_pos;
    let d = base.norm();
    if d < 1e-12 {
        return Err(Error::CoincidentRadars);
    }
    // Distance along the baseline to the radical line, and the squared
    // half-chord; h2 < 0 is the no-intersection discriminant.
    let t = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h2 = r1 * r1 - t * t;
    if h2 < 0.0 {
        return Err(Error::NoIntersection);
    }
    let h = h2.sqrt();
    let along = base * (1.0 / d);
    let normal = Vec2::new(-along.y, along.x);
    let foot = radar1_pos + along * t;
    Ok([foot + normal * h, foot - normal * h])
}

/// Picks one position from the trilateration candidates.
///
/// Out-of-bounds candidates are discarded; among the survivors the one
/// nearest `previous_position` wins, or nearest the bounds center when no
/// history exists.
pub fn resolve_ambiguity(
    candidates: &[Point2],
    bounds: &RoomBounds,
    previous_position: Option<Point2>,
) -> Result<Point2, Error> {
    let reference = previous_position.unwrap_or_else(|| bounds.center());
    candidates
        .iter()
        .copied()
        .filter(|p| bounds.contains(*p))
        .min_by(|a, b| {
            a.distance(reference)
                .partial_cmp(&b.distance(reference))
                .unwrap()
        })
        .ok_or(Error::AllCandidatesOutOfBounds)
}

/// Unit line-of-sight vector from the radar to the target.
pub fn los_unit(target: Point2, radar_pos: Point2) -> Result<Vec2, Error> {
    (target - radar_pos).normalized().ok_or(Error::ZeroRange)
}

/// Projects a velocity vector onto a unit LoS direction: the signed radial
/// speed that radar would measure.
pub fn project_velocity(v: Vec2, u: Vec2) -> f64 {
    v.dot(u)
}

/// Relative tolerance below which the synthesis denominator counts as
/// collinear.
const COLLINEAR_TOL: f64 = 1e-9;

/// Reconstructs the full velocity vector from two radial velocity vectors
/// via the Thales circle construction:
///
/// `v = (v1^2 * v2_perp - v2^2 * v1_perp) / (v1 x v2)`
///
/// on the projected-vector forms, with perp the clockwise rotation. A pair of
/// zero vectors returns exactly zero; a (near-)zero cross product is the
/// collinear error.
pub fn synthesize_velocity_thales(
    v1: &RadialVelocityVector,
    v2: &RadialVelocityVector,
) -> Result<Vec2, Error> {
    let a = v1.as_vector();
    let b = v2.as_vector();
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 && nb == 0.0 {
        return Ok(Vec2::new(0.0, 0.0));
    }
    let den = a.cross(b);
    if den.abs() <= COLLINEAR_TOL * na * nb || den == 0.0 {
        return Err(Error::CollinearLos);
    }
    let num = b.perp_clockwise() * (na * na) - a.perp_clockwise() * (nb * nb);
    Ok(num * (1.0 / den))
}

/// Least-squares reconstruction of the velocity vector from any number of
/// radial-speed measurements: solves `u_i . v = v_i` for all radars.
///
/// For exactly two radars this equals the Thales construction. Errors when
/// fewer than two radars are given or when the normal matrix (the one the
/// solve inverts) has condition number 1e6 or worse.
pub fn synthesize_velocity_lstsq(
    target: Point2,
    radar_positions: &[Point2],
    radial_speeds: &[f64],
) -> Result<Vec2, Error> {
    assert_eq!(radar_positions.len(), radial_speeds.len());
    if radar_positions.len() < 2 {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let n = radar_positions.len();
    let mut rows = Vec::with_capacity(2 * n);
    for &rp in radar_positions {
        let u = los_unit(target, rp)?;
        rows.push(u.x);
        rows.push(u.y);
    }
    let a = DMatrix::from_row_slice(n, 2, &rows);
    let z = DVector::from_column_slice(radial_speeds);

    let svd = a.svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    let cond = if s_min > 0.0 {
        (s_max / s_min).powi(2)
    } else {
        f64::INFINITY
    };
    if !(cond < 1e6) {
        return Err(Error::IllConditioned(cond));
    }
    let sol = svd.solve(&z, 0.0).map_err(|_| Error::IllConditioned(cond))?;
    Ok(Vec2::new(sol[0], sol[1]))
}
