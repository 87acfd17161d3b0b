//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid waveform: {0}")]
    InvalidWaveform(&'static str),

    #[error("invalid trajectory spec: {0}")]
    InvalidTrajectory(String),

    #[error("time {0} s outside the track span")]
    TimeOutOfRange(f64),

    #[error("target is behind or on top of the radar (range {0} m)")]
    TargetBehindRadar(f64),

    #[error("range profile too short for the CFAR window")]
    ProfileTooShort,

    #[error("range-Doppler map smaller than the CFAR reference ring")]
    MapTooSmall,

    #[error("no CFAR detection in this frame")]
    NoDetection,

    #[error("range circles do not intersect (discriminant < 0)")]
    NoIntersection,

    #[error("radar positions coincide; trilateration undefined")]
    CoincidentRadars,

    #[error("all trilateration candidates fall outside the room bounds")]
    AllCandidatesOutOfBounds,

    #[error("line-of-sight undefined at zero range")]
    ZeroRange,

    #[error("lines of sight are (nearly) collinear; velocity synthesis is ill-conditioned")]
    CollinearLos,

    #[error("least-squares geometry is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("annulus intersection is empty; no candidate region")]
    EmptyRegion,

    #[error("every grid candidate failed the velocity-consistency check")]
    EmptyCandidateSet,

    #[error("innovation covariance is singular")]
    SingularInnovation,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown sweep axis: {0}")]
    UnknownAxis(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}
