//! Zeroth-order gradient estimators.
//!
//! Two primitives:
//!
//! * coordinate-wise central differences,
//!   `∇̂_coord f_S(x) = Σ_i (f_S(x+δe_i) − f_S(x−δe_i)) / (2δ) · e_i`,
//!   costing `2d` queries per sample;
//! * the two-point random estimate along a unit direction `u`,
//!   `∇̂_rand f_a(x; u) = d (f_a(x+βu) − f_a(x)) / β · u`, costing 2 queries.
//!
//! and the variance-reduced combinations used by the optimizers. Every
//! estimate reports `queries_used`, the exact number of component
//! evaluations it made.

mod coord;
mod random;

pub use coord::{coord_estimate, coord_estimate_in, spider_coord_step, svrg_coord_inner};
pub use random::{rand_two_point_estimate, sample_unit_sphere, svrg_rand_inner};

use crate::error::{Error, Result};

/// A gradient estimate and the function queries it consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub vector: Vec<f64>,
    pub queries_used: u64,
    /// The smoothing radius was raised to the floating-point floor.
    pub clamped: bool,
}

impl GradientEstimate {
    pub fn is_finite(&self) -> bool {
        self.vector.iter().all(|v| v.is_finite())
    }
}

/// Smoothing radii: `beta` for two-point random estimates, `delta` for
/// coordinate-wise central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    pub beta: f64,
    pub delta: f64,
}

impl SmoothingParams {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("delta", delta)?;
        Ok(SmoothingParams { beta, delta })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSmoothing { name, value })
    }
}

/// Smallest usable smoothing radius at `x`: `1e3 · ε_mach · (1 + ‖x‖_∞)`.
/// Below it the finite difference is dominated by rounding.
pub fn smoothing_floor(points: &[&[f64]]) -> f64 {
    let inf_norm = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    1e3 * f64::EPSILON * (1.0 + inf_norm)
}

/// Validates a smoothing radius and clamps it to the floor.
pub(crate) fn effective_radius(name: &'static str, value: f64, points: &[&[f64]]) -> Result<(f64, bool)> {
    check_positive(name, value)?;
    let floor = smoothing_floor(points);
    if value < floor {
        log::debug!("{name} = {value:e} below floor {floor:e}; clamping");
        Ok((floor, true))
    } else {
        Ok((value, false))
    }
}

pub(crate) fn check_indices(samples: &[usize], n: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    match samples.iter().find(|&&i| i >= n) {
        Some(&index) => Err(Error::IndexOutOfRange { index, n }),
        None => Ok(()),
    }
}

pub(crate) fn check_len(what: &'static str, v: &[f64], d: usize) -> Result<()> {
    if v.len() == d {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            left: v.len(),
            right: d,
        })
    }
}
