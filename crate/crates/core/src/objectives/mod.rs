//! Black-box finite-sum objectives and query metering.
//!
//! An [`Objective`] exposes `n` component functions `f_i: R^d -> R`. The full
//! objective is their arithmetic mean. Benchmark problems additionally
//! implement [`GradientOracle`], which is used only for reporting
//! (`‖∇f(x)‖²` in traces) and for tests. Optimizers never see it: they work
//! through a [`Metered`] view, which hides the oracle and counts every
//! component evaluation.

mod logreg;
mod meter;
mod quadratic;
mod simple;

pub use logreg::{logreg_smoothness_bound, make_nonconvex_logreg, NonconvexLogReg};
pub use meter::{metered, Metered, Phase, QueryMeter};
pub use quadratic::{make_quadratic, make_quadratic_sum, random_quadratic_sum, QuadraticSum};
pub use simple::{ConstantObjective, LinearObjective};

use crate::error::{Error, Result};

/// Constants known about an objective. `None` means unknown.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ObjectiveMetadata {
    /// Lipschitz constant of every `∇f_i` (an upper bound is fine).
    pub smoothness_l: Option<f64>,
    /// Bound on `(1/n) Σ ‖∇f_i(x) − ∇f(x)‖²`.
    pub variance_sigma2: Option<f64>,
    /// Gradient-dominance constant: `f(x) − f* ≤ γ ‖∇f(x)‖²`.
    pub pl_gamma: Option<f64>,
    /// `f(x*)` when known in closed form.
    pub optimum_value: Option<f64>,
}

/// Black-box access to a finite sum of `n` component functions on `R^d`.
///
/// `eval_component` must be deterministic and is only called with `i < n`.
pub trait Objective: Send + Sync {
    fn num_components(&self) -> usize;

    fn dim(&self) -> usize;

    fn eval_component(&self, i: usize, x: &[f64]) -> f64;

    fn metadata(&self) -> ObjectiveMetadata {
        ObjectiveMetadata::default()
    }

    /// Reporting-only gradient access. Black boxes return `None`.
    fn gradient_oracle(&self) -> Option<&dyn GradientOracle> {
        None
    }
}

/// Exact component gradients, for reporting and verification only.
pub trait GradientOracle: Send + Sync {
    /// Writes `∇f_i(x)` into `out`.
    fn component_gradient(&self, i: usize, x: &[f64], out: &mut [f64]);
}

/// `f_S(x) = (1/|S|) Σ_{i∈S} f_i(x)`.
pub fn batch_value(obj: &dyn Objective, samples: &[usize], x: &[f64]) -> f64 {
    let sum: f64 = samples.iter().map(|&i| obj.eval_component(i, x)).sum();
    sum / samples.len() as f64
}

/// Full objective value `f(x)`.
pub fn full_value(obj: &dyn Objective, x: &[f64]) -> f64 {
    let n = obj.num_components();
    let sum: f64 = (0..n).map(|i| obj.eval_component(i, x)).sum();
    sum / n as f64
}

/// Exact `∇f(x)` from the objective's gradient oracle.
///
/// Never touches a query meter: call it on the raw objective, not on a
/// [`Metered`] view (which hides the oracle and returns an error).
pub fn analytic_gradient(obj: &dyn Objective, x: &[f64]) -> Result<Vec<f64>> {
    let all: Vec<usize> = (0..obj.num_components()).collect();
    analytic_batch_gradient(obj, &all, x)
}

/// Exact `∇f_S(x)` for a sample multiset.
pub fn analytic_batch_gradient(obj: &dyn Objective, samples: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    let oracle = obj.gradient_oracle().ok_or(Error::GradientUnavailable)?;
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let d = obj.dim();
    let mut total = vec![0.0; d];
    let mut g = vec![0.0; d];
    for &i in samples {
        oracle.component_gradient(i, x, &mut g);
        for (t, gi) in total.iter_mut().zip(&g) {
            *t += gi;
        }
    }
    let m = samples.len() as f64;
    total.iter_mut().for_each(|t| *t /= m);
    Ok(total)
}

/// Largest value of `(1/n) Σ ‖∇f_i(x) − ∇f(x)‖²` over the probe points.
pub fn gradient_variance(obj: &dyn Objective, probes: &[Vec<f64>]) -> Result<f64> {
    let oracle = obj.gradient_oracle().ok_or(Error::GradientUnavailable)?;
    let n = obj.num_components();
    let mut worst: f64 = 0.0;
    let mut g = vec![0.0; obj.dim()];
    for x in probes {
        let mean = analytic_gradient(obj, x)?;
        let mut acc = 0.0;
        for i in 0..n {
            oracle.component_gradient(i, x, &mut g);
            acc += g.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        }
        worst = worst.max(acc / n as f64);
    }
    Ok(worst)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn central_difference(obj: &dyn Objective, x: &[f64], h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|j| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[j] += h;
                m[j] -= h;
                (full_value(obj, &p) - full_value(obj, &m)) / (2.0 * h)
            })
            .collect()
    }

    fn benchmark_problems(rng: &mut ChaCha8Rng) -> Vec<Box<dyn Objective>> {
        let data = crate::data_io::make_synthetic_logreg_data(rng, 12, 5, 2.0);
        let logreg = make_nonconvex_logreg(&data, 5, 0.1).unwrap();
        let quad = random_quadratic_sum(rng, 4, 5, 10.0, 0.3);
        vec![Box::new(logreg), Box::new(quad)]
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for obj in benchmark_problems(&mut rng) {
            for _ in 0..100 {
                let x: Vec<f64> = (0..obj.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
                let exact = analytic_gradient(obj.as_ref(), &x).unwrap();
                let fd = central_difference(obj.as_ref(), &x, 1e-6);
                for (a, b) in exact.iter().zip(&fd) {
                    assert!((a - b).abs() <= 1e-4, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn constant_objective_has_zero_gradient() {
        let c = ConstantObjective::new(3, 4, 2.5);
        assert_eq!(analytic_gradient(&c, &[1.0, -1.0, 0.0, 3.0]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn metered_view_hides_the_oracle() {
        let q = make_quadratic(&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0]).unwrap();
        let m = metered(&q);
        assert!(matches!(analytic_gradient(&m, &[1.0, 2.0]), Err(Error::GradientUnavailable)));
        assert_eq!(m.meter().total(), 0);
    }

    #[test]
    fn variance_is_zero_for_single_component() {
        let q = make_quadratic(&[2.0, 0.0, 0.0, 1.0], &[1.0, 1.0]).unwrap();
        let probes = vec![vec![0.3, -0.2], vec![1.0, 1.0]];
        assert_eq!(gradient_variance(&q, &probes).unwrap(), 0.0);
    }
}
