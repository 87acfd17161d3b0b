//! Multi-site SISO FMCW radar simulation and tracking toolkit.
//!
//! Two cable-free monostatic radars observe the same indoor target. Each
//! radar measures range and radial velocity only; fusing the two views yields
//! full 2D position (trilateration) and, through velocity synthesis, the full
//! 2D velocity vector. The crate covers the whole chain:
//!
//! - [`scenario`]: radar placement, waveform constants, reference
//!   trajectories, and the inter-radar clock-offset model.
//! - [`signal`]: beat-signal synthesis and a fast measurement-level channel
//!   with resolution-scaled noise and outlier injection.
//! - [`dsp`]: range profiles, range-Doppler maps, CA-CFAR detection, and
//!   bin-to-physical-unit conversion.
//! - [`geometry`]: two-circle trilateration, line-of-sight projection, and
//!   velocity-vector synthesis from radial projections.
//! - [`tracking`]: the constant-velocity EKF baseline and the
//!   velocity-synthesis-assisted (VSA) grid estimator that feeds it.
//! - [`montecarlo`]: seeded trial and sweep harness with RMSE/CDF metrics.
//!
//! Everything is deterministic given a seed; Monte Carlo trials own derived
//! RNG streams so they can run concurrently with order-independent results.

pub mod dsp;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod scenario;
pub mod signal;
pub mod tracking;
pub mod types;

pub use error::Error;
pub use types::{Point2, Vec2};
