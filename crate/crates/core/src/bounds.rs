//! Closed-form variance bounds and convergence constants.
//!
//! The `lemma*_bound` functions bound the mean squared error of the inner
//! estimators against their targets; [`crate::verification`] compares them
//! with Monte-Carlo estimates. Theorem constants are provided for reporting.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub l: f64,
    pub sigma2: f64,
    pub d: usize,
    pub n: usize,
    pub s1: usize,
    pub s2: usize,
    pub q: usize,
    pub k: usize,
    pub eta: f64,
    pub beta: f64,
    pub delta: f64,
    /// `‖x^k − x^{qk₀}‖²`.
    pub dist_sq: f64,
}

impl BoundInputs {
    /// `I(|S1| < n)`.
    pub fn outer_indicator(&self) -> f64 {
        if self.s1 < self.n {
            1.0
        } else {
            0.0
        }
    }

    /// `I(|S1| < n)/|S1| · (2L²dδ² + σ²)`, shared by every lemma.
    fn outer_term(&self) -> f64 {
        self.outer_indicator() / self.s1 as f64 * (2.0 * self.l * self.l * self.d as f64 * self.delta * self.delta + self.sigma2)
    }

    fn l2(&self) -> f64 {
        self.l * self.l
    }
}

/// Bound on `E‖v^k − ∇f_β(x^k)‖²` for the shared-direction SVRG inner estimate.
pub fn lemma1_bound(b: &BoundInputs) -> f64 {
    let (l2, d, s2) = (b.l2(), b.d as f64, b.s2 as f64);
    let beta2 = b.beta * b.beta;
    6.0 * d * l2 * b.dist_sq / s2
        + 3.0 * l2 * beta2 * d * d / s2
        + 18.0 * b.outer_term()
        + 6.0 * l2 * d * b.delta * b.delta
        + 1.5 * beta2 * l2 * d * d
}

/// Bound on `E‖v^k − ∇̂_coord f(x^k)‖²` for the coordinate SVRG inner estimate.
pub fn lemma2_bound(b: &BoundInputs) -> f64 {
    let (l2, d, s2) = (b.l2(), b.d as f64, b.s2 as f64);
    12.0 * l2 * d * b.delta * b.delta / s2 + 6.0 * l2 * b.dist_sq / s2 + 6.0 * b.outer_term()
}

/// Bound on `E‖v^k − ∇̂_coord f(x^k)‖²` for the SPIDER recursion, given
/// `Σ_{t=qk₀}^{k−1} E‖v^t‖²` and `k − qk₀`. `b.dist_sq` is not used.
pub fn lemma3_bound(b: &BoundInputs, sum_v_sq: f64, k_minus_anchor: usize) -> f64 {
    let (l2, d, s2) = (b.l2(), b.d as f64, b.s2 as f64);
    3.0 * b.eta * b.eta * l2 / s2 * sum_v_sq
        + k_minus_anchor as f64 * 6.0 * l2 * d * b.delta * b.delta / s2
        + 3.0 * b.outer_term()
}

/// `(|f_β − f|, ‖∇f_β − ∇f‖)` upper bounds: `(β²L/2, βLd/2)`.
pub fn smoothing_gaps(l: f64, d: usize, beta: f64) -> (f64, f64) {
    (beta * beta * l / 2.0, beta * l * d as f64 / 2.0)
}

/// Lyapunov constants of the ZO-SVRG-Coord-Rand analysis for a free
/// parameter `g > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SvrgConstants {
    pub g: f64,
    pub c: f64,
    pub lambda: f64,
    pub rho: f64,
    pub chi: f64,
    pub tau: f64,
}

impl SvrgConstants {
    /// Upper bound on `E‖∇f(x^ζ)‖²` given `f_β(x⁰) − f_β(x_β*)`. Meaningful
    /// only when `lambda > 0`.
    pub fn stationarity_bound(&self, initial_gap: f64, k: usize) -> f64 {
        initial_gap / self.lambda / (k as f64 + 1.0) + self.tau / self.lambda
    }
}

pub fn svrg_constants(b: &BoundInputs, g: f64) -> SvrgConstants {
    let (l, l2, d, s2, eta) = (b.l, b.l2(), b.d as f64, b.s2 as f64, b.eta);
    let theta = eta * g + 12.0 * eta * eta * d * l2 / s2;
    let c = 9.0 * d * l2 * l * eta * eta / s2 * ((1.0 + theta).powi(b.q as i32) - 1.0) / theta;
    let lambda = eta / 4.0 - 4.0 * c * eta / g - 1.5 * l * eta * eta;
    let rho = (6.0 * eta * eta * l + c * eta / g) * l2 * d * d * b.beta * b.beta;
    let chi = b.beta * b.beta * l2 * d * d + 9.0 * b.outer_term() + 3.0 * l2 * d * b.delta * b.delta;
    let tau = (eta / 2.0 + 2.0 * c * eta / g + 4.0 * c * eta * eta + 3.0 * l * eta * eta) * chi + rho;
    SvrgConstants {
        g,
        c,
        lambda,
        rho,
        chi,
        tau,
    }
}

/// The choice `g = 4000 d η² L³ q / |S2|` used with the mini-batch parameters.
pub fn default_g(b: &BoundInputs) -> f64 {
    4000.0 * b.d as f64 * b.eta * b.eta * b.l.powi(3) * b.q as f64 / b.s2 as f64
}

/// Constants of the ZO-SPIDER-Coord analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpiderConstants {
    pub phi: f64,
    pub theta: f64,
}

impl SpiderConstants {
    /// Upper bound on `E‖∇f(x^ζ)‖²` given `Δ = f(x⁰) − f(x*)`.
    pub fn stationarity_bound(&self, b: &BoundInputs, initial_gap: f64) -> f64 {
        let (l2, d) = (b.l2(), b.d as f64);
        let floor = l2 * d * b.delta * b.delta;
        let lead = 9.0 * b.q as f64 * b.eta * b.eta * l2 / (self.phi * b.s2 as f64) + 3.0 / self.phi;
        3.0 * floor + 3.0 * self.theta + lead * (initial_gap / b.k as f64 + b.eta * (self.theta + floor))
    }
}

pub fn spider_constants(b: &BoundInputs) -> SpiderConstants {
    let (l, l2, d, s2, eta) = (b.l, b.l2(), b.d as f64, b.s2 as f64, b.eta);
    let phi = eta / 2.0 - eta * eta * l / 2.0 - 3.0 * l2 * eta.powi(3) * b.q as f64 / s2;
    let theta = 3.0 * b.q as f64 * l2 * d * b.delta * b.delta / s2 + 3.0 * b.outer_term();
    SpiderConstants { phi, theta }
}
