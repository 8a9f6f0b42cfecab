//! Empirical verification suites.
//!
//! Each suite returns a list of [`Check`]s. Monte-Carlo checks use a fixed
//! number of shards with one RNG stream per shard and reduce shard results
//! in order, so the outcome does not depend on the execution strategy.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{lemma1_bound, lemma2_bound, lemma3_bound, BoundInputs};
use crate::data_io::make_synthetic_logreg_data;
use crate::error::{Error, Result};
use crate::estimators::{
    coord_estimate, rand_two_point_estimate, sample_unit_sphere, spider_coord_step, svrg_coord_inner,
    svrg_rand_inner, SmoothingParams,
};
use crate::objectives::{
    analytic_batch_gradient, analytic_gradient, full_value, gradient_variance, make_nonconvex_logreg, make_quadratic,
    metered, norm_sq, random_quadratic_sum, NonconvexLogReg, Objective, QuadraticSum,
};
use crate::optimizers::sampling::{sample_with_replacement, sample_without_replacement};
use crate::optimizers::{
    generalized_gradient, prox_map, run_prox_zo_spider_coord, run_zo_spider_coord, select_params, Corollary,
    HyperParams, ProxKind, Regularizer, RunOptions,
};
use crate::parallel::{shard_sizes, Execution};

/// Monte-Carlo draws per lemma check.
pub const MC_DRAWS: usize = 10_000;
const SHARDS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Estimators,
    Lemmas,
    Pl,
    Prox,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Estimators, Suite::Lemmas, Suite::Pl, Suite::Prox];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Estimators => "estimators",
            Suite::Lemmas => "lemmas",
            Suite::Pl => "pl",
            Suite::Prox => "prox",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Unknown {
                kind: "suite",
                name: s.to_string(),
            })
    }
}

pub fn run_suite(suite: Suite, exec: Execution) -> Result<Vec<Check>> {
    match suite {
        Suite::Estimators => estimator_checks(exec),
        Suite::Lemmas => Ok(lemma_checks(exec)?.iter().map(MonteCarloCheck::to_check).collect()),
        Suite::Pl => pl_checks(),
        Suite::Prox => prox_checks(),
    }
}

/// Mean and standard error of several quantities over `draws` samples.
///
/// `sample` returns one value per quantity for one draw.
pub fn monte_carlo<F>(exec: Execution, draws: usize, seed: u64, sample: F) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync + Send,
{
    let sizes = shard_sizes(draws, SHARDS);
    let partial = exec.map_range(SHARDS, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64 + 1);
        let mut sums: Vec<f64> = Vec::new();
        let mut sq: Vec<f64> = Vec::new();
        for _ in 0..sizes[s] {
            let vals = sample(&mut rng);
            if sums.is_empty() {
                sums = vec![0.0; vals.len()];
                sq = vec![0.0; vals.len()];
            }
            for (i, v) in vals.into_iter().enumerate() {
                sums[i] += v;
                sq[i] += v * v;
            }
        }
        (sums, sq)
    });
    let width = partial.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    let (mut sums, mut sq) = (vec![0.0; width], vec![0.0; width]);
    for (s, q) in &partial {
        for i in 0..s.len() {
            sums[i] += s[i];
            sq[i] += q[i];
        }
    }
    let m = draws as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / m).collect();
    let ses = sq
        .iter()
        .zip(&means)
        .map(|(q, mean)| {
            let var = (q / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
            (var / m).sqrt()
        })
        .collect();
    (means, ses)
}

/// Least-squares line `y ≈ slope·x + intercept`; returns `(slope, intercept, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

fn random_point(rng: &mut impl Rng, d: usize, radius: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-radius..radius)).collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Small seeded nonconvex logistic-regression instance.
pub fn small_logreg(seed: u64, n: usize, d: usize) -> NonconvexLogReg {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = make_synthetic_logreg_data(&mut rng, n, d, 1.0);
    make_nonconvex_logreg(&data, d, 0.1).expect("synthetic data is valid")
}

fn smoothness(obj: &dyn Objective) -> f64 {
    obj.metadata().smoothness_l.expect("benchmark objectives know L")
}

/// Number of points among `points` where `‖∇̂_coord f − ∇f‖² > L²dδ²`.
pub fn coord_bias_violations(obj: &dyn Objective, points: &[Vec<f64>], delta: f64) -> Result<usize> {
    let l = smoothness(obj);
    let bound = l * l * obj.dim() as f64 * delta * delta;
    let all: Vec<usize> = (0..obj.num_components()).collect();
    let mut bad = 0;
    for x in points {
        let est = coord_estimate(obj, &all, x, delta)?;
        let g = analytic_gradient(obj, x)?;
        if sq_dist(&est.vector, &g) > bound {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn estimator_checks(exec: Execution) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // Coordinate bias.
    let logreg = small_logreg(1, 6, 3);
    let quad = random_quadratic_sum(&mut rng, 1, 5, 10.0, 0.0);
    for (name, obj, d) in [("logreg", &logreg as &dyn Objective, 3), ("quadratic", &quad, 5)] {
        let points: Vec<Vec<f64>> = (0..100).map(|_| random_point(&mut rng, d, 2.0)).collect();
        for delta in [1e-2, 1e-3, 1e-4] {
            let bad = coord_bias_violations(obj, &points, delta)?;
            checks.push(Check::new(
                format!("coordinate bias bound ({name}, delta={delta:e})"),
                bad == 0,
                format!("{bad} violations at 100 points"),
            ));
        }
    }

    // Query accounting.
    let m = metered(&logreg);
    let est = coord_estimate(&m, &[0, 1, 2, 3, 4, 5], &[0.1, 0.2, 0.3], 1e-3)?;
    checks.push(Check::new(
        "coordinate estimate query count",
        est.queries_used == m.queries() && m.queries() == 36,
        format!("reported {}, metered {}", est.queries_used, m.queries()),
    ));

    // Sphere second moment.
    let (means, _) = monte_carlo(exec, 100_000, 3, |r| {
        let u = sample_unit_sphere(r, 3);
        (0..9).map(|ij| u[ij / 3] * u[ij % 3]).collect()
    });
    let worst = means
        .iter()
        .enumerate()
        .map(|(ij, m)| (m - if ij / 3 == ij % 3 { 1.0 / 3.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "sphere second moment E[uu^T] = I/d",
        worst <= 0.01,
        format!("max entry error {worst:.2e}"),
    ));

    // Two-point unbiasedness on a quadratic (where ∇f_β = ∇f).
    let iso = make_quadratic(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], &[0.0; 3])?;
    let x = [0.5, -1.0, 2.0];
    let (means, ses) = monte_carlo(exec, 100_000, 4, |r| {
        let u = sample_unit_sphere(r, 3);
        rand_two_point_estimate(&iso, 0, &x, &u, 0.1).expect("valid input").vector
    });
    let worst = (0..3).map(|i| (means[i] - x[i]).abs() / ses[i]).fold(0.0, f64::max);
    checks.push(Check::new(
        "two-point estimate unbiased on quadratic",
        worst <= 4.0,
        format!("max deviation {worst:.2} standard errors"),
    ));

    // Full outer batch is deterministic.
    let all: Vec<usize> = (0..6).collect();
    let mut shuffled = all.clone();
    shuffled.reverse();
    let a = coord_estimate(&logreg, &all, &x, 1e-3)?;
    let b = coord_estimate(&logreg, &all, &x, 1e-3)?;
    checks.push(Check::new(
        "full outer batch has zero sampling variance",
        a == b && sq_dist(&a.vector, &coord_estimate(&logreg, &shuffled, &x, 1e-3)?.vector) < 1e-24,
        "identical estimates",
    ));
    Ok(checks)
}

/// One Monte-Carlo domination check: `mean ≤ bound + 3·std_err`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloCheck {
    pub name: String,
    pub inputs: BoundInputs,
    pub mean: f64,
    pub std_err: f64,
    pub bound: f64,
    /// SPIDER drift checks only: `k − qk₀` and the estimated `Σ E‖v^t‖²`.
    pub k_minus_anchor: Option<usize>,
    pub sum_v_sq: Option<f64>,
}

impl MonteCarloCheck {
    pub fn passed(&self) -> bool {
        self.mean <= self.bound + 3.0 * self.std_err
    }

    pub fn to_check(&self) -> Check {
        Check::new(
            self.name.clone(),
            self.passed(),
            format!("mean {:.4e} (se {:.1e}) vs bound {:.4e}", self.mean, self.std_err, self.bound),
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Setting {
    s1: usize,
    s2: usize,
    beta: f64,
    delta: f64,
    radius: f64,
    eta: f64,
}

const SETTINGS: [Setting; 3] = [
    Setting { s1: 6, s2: 1, beta: 0.05, delta: 0.05, radius: 0.1, eta: 0.1 },
    Setting { s1: 3, s2: 2, beta: 0.01, delta: 0.01, radius: 0.5, eta: 0.3 },
    Setting { s1: 6, s2: 4, beta: 0.1, delta: 1e-3, radius: 1.0, eta: 0.5 },
];

/// SPIDER epoch length used in the recursion checks.
const SPIDER_Q: usize = 5;

/// `∇f_β(x) = E_w ∇f(x + βw)` for `w` uniform in the unit ball, averaged
/// with the analytic gradient.
fn smoothed_gradient(obj: &dyn Objective, x: &[f64], beta: f64, draws: usize, seed: u64) -> Vec<f64> {
    let d = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = vec![0.0; d];
    for _ in 0..draws {
        let dir = sample_unit_sphere(&mut rng, d);
        let r = beta * rng.random::<f64>().powf(1.0 / d as f64);
        let p: Vec<f64> = x.iter().zip(&dir).map(|(a, u)| a + r * u).collect();
        let g = analytic_gradient(obj, &p).expect("benchmark objective has a gradient");
        acc.iter_mut().zip(&g).for_each(|(s, v)| *s += v);
    }
    acc.iter().map(|s| s / draws as f64).collect()
}

/// Monte-Carlo checks of the three inner-estimator variance bounds on three
/// logistic-regression instances (n = 6, d = 3) under three settings each.
pub fn lemma_checks(exec: Execution) -> Result<Vec<MonteCarloCheck>> {
    let (n, d) = (6usize, 3usize);
    let mut out = Vec::new();
    for inst in 0..3u64 {
        let obj = small_logreg(100 + inst, n, d);
        let l = smoothness(&obj);
        for (si, s) in SETTINGS.iter().enumerate() {
            let tag = format!("instance {inst}, setting {si}");
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * inst + si as u64);
            let anchor = random_point(&mut rng, d, 1.0);
            let dir = sample_unit_sphere(&mut rng, d);
            let xk: Vec<f64> = anchor.iter().zip(&dir).map(|(a, u)| a + s.radius * u).collect();
            let mut probes = vec![anchor.clone(), xk.clone()];
            probes.extend((0..20).map(|_| random_point(&mut rng, d, 2.0)));
            let sigma2 = gradient_variance(&obj, &probes)?;
            let inputs = BoundInputs {
                l,
                sigma2,
                d,
                n,
                s1: s.s1,
                s2: s.s2,
                q: SPIDER_Q,
                k: 10 * SPIDER_Q,
                eta: s.eta,
                beta: s.beta,
                delta: s.delta,
                dist_sq: sq_dist(&xk, &anchor),
            };
            let seed = 7 + 31 * inst + si as u64;

            // Shared-direction SVRG inner estimate vs ∇f_β(x^k).
            let target = smoothed_gradient(&obj, &xk, s.beta, 20_000, seed);
            let (m, se) = monte_carlo(exec, MC_DRAWS, seed, |r| {
                let s1 = sample_without_replacement(r, n, s.s1);
                let anchor_grad = coord_estimate(&obj, &s1, &anchor, s.delta).expect("valid").vector;
                let batch = sample_with_replacement(r, n, s.s2);
                let us: Vec<Vec<f64>> = (0..s.s2).map(|_| sample_unit_sphere(r, d)).collect();
                let v = svrg_rand_inner(&obj, &batch, &us, &xk, &anchor, &anchor_grad, s.beta).expect("valid");
                vec![sq_dist(&v.vector, &target)]
            });
            out.push(MonteCarloCheck {
                name: format!("random-inner variance bound ({tag})"),
                inputs,
                mean: m[0],
                std_err: se[0],
                bound: lemma1_bound(&inputs),
                k_minus_anchor: None,
                sum_v_sq: None,
            });

            // Coordinate SVRG inner estimate vs ∇̂_coord f(x^k).
            let all: Vec<usize> = (0..n).collect();
            let target = coord_estimate(&obj, &all, &xk, s.delta)?.vector;
            let (m, se) = monte_carlo(exec, MC_DRAWS, seed + 1, |r| {
                let s1 = sample_without_replacement(r, n, s.s1);
                let anchor_grad = coord_estimate(&obj, &s1, &anchor, s.delta).expect("valid").vector;
                let batch = sample_with_replacement(r, n, s.s2);
                let v = svrg_coord_inner(&obj, &batch, &xk, &anchor, &anchor_grad, s.delta, Execution::Sequential)
                    .expect("valid");
                vec![sq_dist(&v.vector, &target)]
            });
            out.push(MonteCarloCheck {
                name: format!("coordinate-inner variance bound ({tag})"),
                inputs,
                mean: m[0],
                std_err: se[0],
                bound: lemma2_bound(&inputs),
                k_minus_anchor: None,
                sum_v_sq: None,
            });

            // SPIDER recursion along one epoch. Per draw: errors at k = 1..q−1,
            // then ‖v^t‖² at t = 0..q−2.
            let (m, se) = monte_carlo(exec, MC_DRAWS, seed + 2, |r| {
                let s1 = sample_without_replacement(r, n, s.s1);
                let mut v = coord_estimate(&obj, &s1, &anchor, s.delta).expect("valid").vector;
                let mut x = anchor.clone();
                let mut errs = Vec::with_capacity(SPIDER_Q - 1);
                let mut vsq = Vec::with_capacity(SPIDER_Q - 1);
                for _ in 1..SPIDER_Q {
                    vsq.push(norm_sq(&v));
                    let next: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - s.eta * b).collect();
                    let batch = sample_with_replacement(r, n, s.s2);
                    v = spider_coord_step(&obj, &batch, &next, &x, &v, s.delta, Execution::Sequential)
                        .expect("valid")
                        .vector;
                    x = next;
                    let all: Vec<usize> = (0..n).collect();
                    let exact = coord_estimate(&obj, &all, &x, s.delta).expect("valid").vector;
                    errs.push(sq_dist(&v, &exact));
                }
                errs.extend(vsq);
                errs
            });
            let mut cumulative = 0.0;
            for j in 1..SPIDER_Q {
                cumulative += m[SPIDER_Q - 1 + j - 1];
                out.push(MonteCarloCheck {
                    name: format!("recursive variance bound ({tag}, k - qk0 = {j})"),
                    inputs,
                    mean: m[j - 1],
                    std_err: se[j - 1],
                    bound: lemma3_bound(&inputs, cumulative, j),
                    k_minus_anchor: Some(j),
                    sum_v_sq: Some(cumulative),
                });
            }
        }
    }
    Ok(out)
}

/// Outcome of the gradient-dominance convergence experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PlReport {
    pub params: HyperParams,
    /// `f(x^{qm}) − f*` for epochs `m = 0, 1, ...`.
    pub epoch_gaps: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
    pub final_gap: f64,
    pub epochs_fitted: usize,
}

/// The positive-definite quadratic (d = 10, condition number 10) used by the
/// gradient-dominance checks, and its smoothness constant.
pub fn pl_problem(seed: u64) -> QuadraticSum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_quadratic_sum(&mut rng, 100, 10, 10.0, 0.5)
}

/// Runs ZO-SPIDER-Coord with the `cor3` rule and `δ = 1e-6` and fits
/// `log(f(x^{qm}) − f*)` against `m` over the first `epochs` epochs.
pub fn pl_experiment(seed: u64, k: usize, epochs: usize) -> Result<PlReport> {
    let obj = pl_problem(seed);
    let l = smoothness(&obj);
    let mut hp = select_params(Corollary::Cor3, obj.num_components(), obj.dim(), k, l);
    hp.smoothing = SmoothingParams::new(hp.smoothing.beta, 1e-6)?;
    hp.seed = seed;
    let x0 = vec![1.0; obj.dim()];
    let trace = run_zo_spider_coord(&obj, &hp, &RunOptions::new(x0))?;
    let fs = obj.metadata().optimum_value.expect("quadratic optimum is known");
    let epoch_gaps: Vec<f64> = trace
        .rows
        .iter()
        .filter(|r| (r.k as usize).is_multiple_of(hp.q))
        .map(|r| r.f - fs)
        .collect();
    let fitted: Vec<(f64, f64)> = epoch_gaps
        .iter()
        .take(epochs + 1)
        .enumerate()
        .filter(|(_, g)| **g > 0.0)
        .map(|(m, g)| (m as f64, g.ln()))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = fitted.iter().copied().unzip();
    let (slope, _, r2) = linear_fit(&xs, &ys);
    let final_gap = trace.last().map_or(f64::NAN, |r| r.f - fs);
    Ok(PlReport {
        params: hp,
        epoch_gaps,
        slope,
        r2,
        final_gap,
        epochs_fitted: xs.len(),
    })
}

pub fn pl_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let rep = pl_experiment(5, 2000, 20)?;
    checks.push(Check::new(
        "linear decay of log optimality gap",
        rep.slope < 0.0 && rep.r2 > 0.95,
        format!("slope {:.4}, R^2 {:.4} over {} epochs", rep.slope, rep.r2, rep.epochs_fitted),
    ));
    checks.push(Check::new(
        "final optimality gap",
        rep.final_gap < 1e-8,
        format!("f - f* = {:.3e}", rep.final_gap),
    ));

    // Gradient dominance holds exactly for the quadratic.
    let obj = pl_problem(5);
    let gamma = obj.metadata().pl_gamma.expect("positive definite");
    let fs = obj.metadata().optimum_value.expect("known optimum");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let x = random_point(&mut rng, obj.dim(), 5.0);
        let g = analytic_gradient(&obj, &x)?;
        worst = worst.max(full_value(&obj, &x) - fs - gamma * norm_sq(&g));
    }
    checks.push(Check::new(
        "gradient dominance f - f* <= gamma |grad f|^2",
        worst <= 1e-9,
        format!("max violation {worst:.3e} over 1000 points"),
    ));
    Ok(checks)
}

/// Minimizer of `a·z + (z − x)²/(2η) + t|z|` by enumerating candidates: the
/// kink at zero and the stationary point of each quadratic piece.
fn scalar_prox_reference(a: f64, x: f64, eta: f64, t: f64) -> f64 {
    let obj = |z: f64| a * z + (z - x).powi(2) / (2.0 * eta) + t * z.abs();
    [0.0, x - eta * (a + t), x - eta * (a - t)]
        .into_iter()
        .min_by(|p, q| obj(*p).total_cmp(&obj(*q)))
        .expect("three candidates")
}

pub fn prox_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let obj = small_logreg(9, 200, 20);
    let l = smoothness(&obj);
    let hp = HyperParams {
        seed: 3,
        ..select_params(Corollary::Cor3, 200, 20, 2000, l)
    };
    let opts = RunOptions::new(vec![0.0; 20]);

    let plain = run_zo_spider_coord(&obj, &hp, &opts)?;
    let zero = run_prox_zo_spider_coord(&obj, &Regularizer::Zero, &hp, &opts)?;
    checks.push(Check::new(
        "proximal variant with h = 0 matches the plain run",
        plain.rows == zero.rows && plain.final_x == zero.final_x && plain.output_x == zero.output_x,
        format!("{} rows compared", plain.rows.len()),
    ));

    let h = Regularizer::l1(0.01)?;
    let opts = RunOptions::new(vec![0.0; 20]);
    let run = run_prox_zo_spider_coord(&obj, &h, &hp, &opts)?;
    let g0 = norm_sq(&generalized_gradient(&obj, &opts.x0, hp.eta, &h)?);
    let gz = norm_sq(&generalized_gradient(&obj, &run.output_x, hp.eta, &h)?);
    checks.push(Check::new(
        "generalized gradient reduced tenfold",
        gz <= 0.1 * g0,
        format!("|G|^2 from {g0:.3e} to {gz:.3e} at output index {}", run.output_index),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let quad = random_quadratic_sum(&mut rng, 1, 4, 5.0, 0.0);
    let (eta, lambda) = (0.1, 0.7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x = random_point(&mut rng, 4, 3.0);
        let g = analytic_batch_gradient(&quad, &[0], &x)?;
        let gg = generalized_gradient(&quad, &x, eta, &Regularizer::L1 { lambda })?;
        for j in 0..4 {
            let plus = scalar_prox_reference(g[j], x[j], eta, lambda);
            worst = worst.max(((x[j] - plus) / eta - gg[j]).abs());
        }
    }
    checks.push(Check::new(
        "generalized gradient matches scalar minimization",
        worst <= 1e-8,
        format!("max error {worst:.2e}"),
    ));

    let mut worst_ratio: f64 = 0.0;
    for _ in 0..1000 {
        let a = random_point(&mut rng, 5, 2.0);
        let b = random_point(&mut rng, 5, 2.0);
        let t = rng.random_range(0.0..1.0);
        let pa = prox_map(&a, t, ProxKind::L1);
        let pb = prox_map(&b, t, ProxKind::L1);
        worst_ratio = worst_ratio.max(sq_dist(&pa, &pb).sqrt() / sq_dist(&a, &b).sqrt());
    }
    checks.push(Check::new(
        "soft thresholding is nonexpansive",
        worst_ratio <= 1.0 + 1e-12,
        format!("max ratio {worst_ratio:.6}"),
    ));
    Ok(checks)
}
