use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{analytic_gradient, Objective};

/// Closed-form proximable convex regularizer `h`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Regularizer {
    #[default]
    Zero,
    /// `h(x) = λ ‖x‖₁`.
    L1 { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProxKind {
    Zero,
    L1,
}

/// Proximal map of `t·h` for unit-weight `h`: soft thresholding at
/// `eta_times_lambda` for ℓ1, identity for zero.
pub fn prox_map(z: &[f64], eta_times_lambda: f64, kind: ProxKind) -> Vec<f64> {
    debug_assert!(eta_times_lambda >= 0.0);
    match kind {
        ProxKind::Zero => z.to_vec(),
        ProxKind::L1 => z
            .iter()
            .map(|&v| v.signum() * (v.abs() - eta_times_lambda).max(0.0))
            .collect(),
    }
}

impl Regularizer {
    pub fn l1(lambda: f64) -> Result<Self> {
        if lambda >= 0.0 && lambda.is_finite() {
            Ok(Regularizer::L1 { lambda })
        } else {
            Err(Error::Config(format!("l1 lambda must be nonnegative, got {lambda}")))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Regularizer::Zero)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match *self {
            Regularizer::Zero => 0.0,
            Regularizer::L1 { lambda } => lambda * x.iter().map(|v| v.abs()).sum::<f64>(),
        }
    }

    /// `argmin_z { ⟨g, z⟩ + ‖z − x‖²/(2η) + h(z) } = prox_{ηh}(x − ηg)`.
    pub fn prox_step(&self, x: &[f64], g: &[f64], eta: f64) -> Vec<f64> {
        let z: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - eta * b).collect();
        match *self {
            Regularizer::Zero => z,
            Regularizer::L1 { lambda } => prox_map(&z, eta * lambda, ProxKind::L1),
        }
    }
}

/// Generalized projected gradient `G(x, ∇f(x), η) = (x − x⁺)/η` with
/// `x⁺ = prox_{ηh}(x − η∇f(x))`. Reporting only: uses the analytic
/// gradient and spends no queries. With `h ≡ 0` it is `∇f(x)` exactly.
pub fn generalized_gradient(obj: &dyn Objective, x: &[f64], eta: f64, h: &Regularizer) -> Result<Vec<f64>> {
    let g = analytic_gradient(obj, x)?;
    Ok(generalized_gradient_from(x, &g, eta, h))
}

pub(crate) fn generalized_gradient_from(x: &[f64], g: &[f64], eta: f64, h: &Regularizer) -> Vec<f64> {
    if h.is_zero() {
        return g.to_vec();
    }
    let plus = h.prox_step(x, g, eta);
    x.iter().zip(&plus).map(|(a, b)| (a - b) / eta).collect()
}
