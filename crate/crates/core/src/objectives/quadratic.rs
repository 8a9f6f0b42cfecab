use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GradientOracle, Objective, ObjectiveMetadata};
use crate::error::{Error, Result};

/// Finite sum of quadratics `f_i(x) = ½ xᵀA_i x − b_iᵀx`.
///
/// Used as a test problem: central differences are exact on it, and when the
/// mean matrix `Ā` is positive definite the sum is gradient dominated with
/// `γ = 1/(2 λ_min(Ā))`.
#[derive(Debug, Clone)]
pub struct QuadraticSum {
    d: usize,
    mats: Vec<Vec<f64>>,
    rhs: Vec<Vec<f64>>,
    mean_eigen_range: (f64, f64),
    smoothness: f64,
    minimizer: Option<Vec<f64>>,
    optimum: Option<f64>,
}

/// Single quadratic `½ xᵀAx − bᵀx` with `A` (row-major, `d × d`) symmetric PSD.
pub fn make_quadratic(a: &[f64], b: &[f64]) -> Result<QuadraticSum> {
    let q = make_quadratic_sum(vec![(a.to_vec(), b.to_vec())])?;
    if q.mean_eigen_range.0 < -psd_tolerance(a) {
        return Err(Error::NotPsd(q.mean_eigen_range.0));
    }
    Ok(q)
}

fn psd_tolerance(a: &[f64]) -> f64 {
    1e-12 * (1.0 + a.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Finite sum of quadratics. Each `A_i` must be symmetric; the mean matrix
/// must be PSD (individual components may be indefinite).
pub fn make_quadratic_sum(components: Vec<(Vec<f64>, Vec<f64>)>) -> Result<QuadraticSum> {
    if components.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = components[0].1.len();
    let n = components.len() as f64;
    let mut mean_a = DMatrix::<f64>::zeros(d, d);
    let mut mean_b = DVector::<f64>::zeros(d);
    let mut smoothness: f64 = 0.0;
    let mut mats = Vec::with_capacity(components.len());
    let mut rhs = Vec::with_capacity(components.len());
    for (a, b) in components {
        if b.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: b.len() });
        }
        if a.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: a.len() });
        }
        let m = DMatrix::from_row_slice(d, d, &a);
        let asym = (&m - m.transpose()).abs().max();
        if asym > psd_tolerance(&a) {
            return Err(Error::NotSymmetric(asym));
        }
        let eig = m.clone().symmetric_eigenvalues();
        smoothness = smoothness.max(eig.amax());
        mean_a += &m / n;
        mean_b += DVector::from_column_slice(&b) / n;
        mats.push(a);
        rhs.push(b);
    }
    let eig = mean_a.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    let tol = psd_tolerance(mean_a.as_slice());
    if lo < -tol && mats.len() > 1 {
        return Err(Error::NotPsd(lo));
    }
    let (minimizer, optimum) = if lo > tol {
        let chol = mean_a.clone().cholesky().expect("positive definite");
        let xs = chol.solve(&mean_b);
        let fs = -0.5 * mean_b.dot(&xs);
        (Some(xs.as_slice().to_vec()), Some(fs))
    } else if mean_b.iter().all(|&v| v == 0.0) {
        (Some(vec![0.0; d]), Some(0.0))
    } else {
        (None, None)
    };
    Ok(QuadraticSum {
        d,
        mats,
        rhs,
        mean_eigen_range: (lo, hi),
        smoothness,
        minimizer,
        optimum,
    })
}

/// Random finite-sum quadratic with `n` components whose mean matrix has
/// eigenvalues spread linearly over `[1, condition]`. Each component is the
/// mean plus a zero-sum symmetric perturbation of spectral norm at most
/// `spread` (so components stay positive definite for `spread < 1`).
pub fn random_quadratic_sum<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    d: usize,
    condition: f64,
    spread: f64,
) -> QuadraticSum {
    let gauss = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let q = gauss.qr().q();
    let eigs = DVector::from_fn(d, |i, _| {
        if d == 1 {
            1.0
        } else {
            1.0 + (condition - 1.0) * i as f64 / (d - 1) as f64
        }
    });
    let mean = &q * DMatrix::from_diagonal(&eigs) * q.transpose();
    let mean = (&mean + mean.transpose()) * 0.5;

    let mut perturb: Vec<DMatrix<f64>> = (0..n)
        .map(|_| {
            let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
            (&g + g.transpose()) * 0.5
        })
        .collect();
    let avg = perturb.iter().fold(DMatrix::zeros(d, d), |acc, p| acc + p) / n as f64;
    let mut max_norm: f64 = 0.0;
    for p in &mut perturb {
        *p -= &avg;
        max_norm = max_norm.max(p.clone().symmetric_eigenvalues().amax());
    }
    let scale = if max_norm > 0.0 { spread / max_norm } else { 0.0 };

    let components = perturb
        .into_iter()
        .map(|p| {
            let a = &mean + p * scale;
            let a = (&a + a.transpose()) * 0.5;
            let b: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            (a.transpose().as_slice().to_vec(), b)
        })
        .collect();
    make_quadratic_sum(components).expect("constructed quadratic is valid")
}

impl QuadraticSum {
    /// `(λ_min, λ_max)` of the mean matrix `Ā`.
    pub fn eigen_range(&self) -> (f64, f64) {
        self.mean_eigen_range
    }

    pub fn minimizer(&self) -> Option<&[f64]> {
        self.minimizer.as_deref()
    }

    /// Row-major `A_i`.
    pub fn matrix(&self, i: usize) -> &[f64] {
        &self.mats[i]
    }

    pub fn rhs(&self, i: usize) -> &[f64] {
        &self.rhs[i]
    }

    /// Trace of the mean matrix.
    pub fn mean_trace(&self) -> f64 {
        let n = self.mats.len() as f64;
        self.mats
            .iter()
            .map(|a| (0..self.d).map(|j| a[j * self.d + j]).sum::<f64>())
            .sum::<f64>()
            / n
    }

    fn mat_vec(&self, i: usize, x: &[f64], out: &mut [f64]) {
        let a = &self.mats[i];
        for (r, o) in out.iter_mut().enumerate() {
            *o = super::dot(&a[r * self.d..(r + 1) * self.d], x);
        }
    }
}

impl Objective for QuadraticSum {
    fn num_components(&self) -> usize {
        self.mats.len()
    }

    fn dim(&self) -> usize {
        self.d
    }

    fn eval_component(&self, i: usize, x: &[f64]) -> f64 {
        let a = &self.mats[i];
        let mut quad = 0.0;
        for r in 0..self.d {
            quad += x[r] * super::dot(&a[r * self.d..(r + 1) * self.d], x);
        }
        0.5 * quad - super::dot(&self.rhs[i], x)
    }

    fn metadata(&self) -> ObjectiveMetadata {
        let (lo, _) = self.mean_eigen_range;
        let pd = lo > psd_tolerance(&[self.smoothness]);
        ObjectiveMetadata {
            smoothness_l: Some(self.smoothness),
            variance_sigma2: None,
            pl_gamma: pd.then(|| 1.0 / (2.0 * lo)),
            optimum_value: self.optimum,
        }
    }

    fn gradient_oracle(&self) -> Option<&dyn GradientOracle> {
        Some(self)
    }
}

impl GradientOracle for QuadraticSum {
    fn component_gradient(&self, i: usize, x: &[f64], out: &mut [f64]) {
        self.mat_vec(i, x, out);
        for (o, b) in out.iter_mut().zip(&self.rhs[i]) {
            *o -= b;
        }
    }
}
