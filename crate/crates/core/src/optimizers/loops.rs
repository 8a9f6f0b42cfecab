use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prox::generalized_gradient_from;
use super::sampling::{sample_with_replacement, sample_without_replacement};
use super::{Algorithm, HyperParams, Regularizer, RunOptions, RunTrace, TraceRow};
use crate::error::{Error, Result};
use crate::estimators::{
    coord_estimate_in, effective_radius, rand_two_point_estimate, sample_unit_sphere, spider_coord_step,
    svrg_coord_inner, svrg_rand_inner, GradientEstimate,
};
use crate::objectives::{analytic_gradient, full_value, metered, norm_sq, Metered, Objective, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Inner {
    SvrgRand,
    SvrgCoord,
    Spider,
}

#[derive(Debug, Clone, Copy)]
struct Variant {
    inner: Inner,
    /// Appendix-style convex variant: random snapshot and single-sample inner steps.
    convex: bool,
    /// Apply the proximal map of `h` in the update.
    prox: bool,
}

/// Per-run bookkeeping shared by every loop: rows, timing, output selection
/// and the non-finite guard.
struct Recorder<'a> {
    raw: &'a dyn Objective,
    h: Regularizer,
    eta: f64,
    opts: &'a RunOptions,
    start: Instant,
    trace: RunTrace,
    zeta: usize,
}

impl<'a> Recorder<'a> {
    fn new(alg: Algorithm, raw: &'a dyn Objective, h: Regularizer, eta: f64, opts: &'a RunOptions, zeta: usize) -> Self {
        Recorder {
            raw,
            h,
            eta,
            opts,
            start: Instant::now(),
            trace: RunTrace {
                algorithm: alg.name().to_string(),
                output_index: zeta,
                optimum_value: raw.metadata().optimum_value,
                ..RunTrace::default()
            },
            zeta,
        }
    }

    fn row(&self, k: usize, queries: u64, x: &[f64]) -> TraceRow {
        let f = full_value(self.raw, x) + self.h.value(x);
        let grad_norm_sq = match analytic_gradient(self.raw, x) {
            Ok(g) => norm_sq(&generalized_gradient_from(x, &g, self.eta, &self.h)),
            Err(_) => f64::NAN,
        };
        let wall_ms = if self.opts.record_wall_time {
            self.start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        TraceRow {
            k: k as u64,
            queries,
            f,
            grad_norm_sq,
            wall_ms,
        }
    }

    /// Called with `x^k` at the start of iteration `k`.
    fn visit(&mut self, k: usize, queries: u64, x: &[f64]) {
        if k == self.zeta {
            self.trace.output_x = x.to_vec();
        }
        if self.opts.record_iterates {
            self.trace.iterates.push(x.to_vec());
        }
        if k.is_multiple_of(self.opts.report_every.max(1)) {
            let row = self.row(k, queries, x);
            self.trace.rows.push(row);
        }
    }

    fn over_budget(&self, queries: u64) -> bool {
        self.opts.query_budget.is_some_and(|b| queries >= b)
    }

    fn note(&mut self, est: &GradientEstimate) {
        if est.clamped && !self.trace.smoothing_clamped {
            log::warn!("smoothing radius raised to the floating-point floor");
        }
        self.trace.smoothing_clamped |= est.clamped;
    }

    /// Closes the run at iterate `k` (not yet visited) with final point `x`.
    fn finish(mut self, k: usize, x: Vec<f64>, meter: &Metered<'_>) -> RunTrace {
        let queries = meter.queries();
        if self.opts.record_iterates && self.trace.aborted.is_none() {
            self.trace.iterates.push(x.clone());
        }
        if self.trace.rows.last().is_none_or(|r| r.k != k as u64) && self.trace.aborted.is_none() {
            let row = self.row(k, queries, &x);
            self.trace.rows.push(row);
        }
        if self.trace.output_x.is_empty() {
            // ζ lies beyond the iterations that ran (budget stop or abort).
            self.trace.output_index = k;
            self.trace.output_x = x.clone();
        }
        self.trace.final_x = x;
        self.trace.total_queries = queries;
        self.trace.outer_queries = meter.meter().phase_total(Phase::Outer);
        self.trace.inner_queries = meter.meter().phase_total(Phase::Inner);
        self.trace
    }
}

fn check_start(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<()> {
    hp.validate(obj.num_components())?;
    if opts.x0.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: opts.x0.len(),
        });
    }
    Ok(())
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|a| a.is_finite())
}

fn descend(x: &[f64], v: &[f64], eta: f64, h: Option<&Regularizer>) -> Vec<f64> {
    match h {
        Some(h) => h.prox_step(x, v, eta),
        None => x.iter().zip(v).map(|(a, b)| a - eta * b).collect(),
    }
}

fn run_variance_reduced(
    alg: Algorithm,
    variant: Variant,
    obj: &dyn Objective,
    h: Regularizer,
    hp: &HyperParams,
    opts: &RunOptions,
) -> Result<RunTrace> {
    check_start(obj, hp, opts)?;
    let (n, d) = (obj.num_components(), obj.dim());
    let s2 = if variant.convex { 1 } else { hp.s2 };
    let (beta, delta) = (hp.smoothing.beta, hp.smoothing.delta);
    let exec = opts.exec;
    let m = metered(obj);
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let zeta = rng.random_range(0..=hp.k);
    let mut rec = Recorder::new(alg, obj, h, hp.eta, opts, zeta);
    let prox = variant.prox.then_some(&h);

    let mut x = opts.x0.clone();
    let mut x_prev = x.clone();
    let mut v_prev = vec![0.0; d];
    let mut anchor_x = x.clone();
    let mut anchor_v = vec![0.0; d];
    // Convex variants: the next epoch starts from a uniformly chosen iterate
    // of the current one, selected by an offset drawn at epoch start.
    let mut snapshot_offset = 0usize;
    let mut snapshot: Option<Vec<f64>> = None;

    for k in 0..=hp.k {
        let outer = k % hp.q == 0;
        if variant.convex && outer && k > 0 {
            if let Some(s) = snapshot.take() {
                x = s;
            }
        }
        if rec.over_budget(m.queries()) {
            return Ok(rec.finish(k, x, &m));
        }
        rec.visit(k, m.queries(), &x);
        if variant.convex {
            if outer {
                snapshot_offset = rng.random_range(0..hp.q);
            }
            if k % hp.q == snapshot_offset {
                snapshot = Some(x.clone());
            }
        }

        let est = if outer {
            m.meter().set_phase(Phase::Outer);
            let s1 = sample_without_replacement(&mut rng, n, hp.s1);
            let est = coord_estimate_in(exec, &m, &s1, &x, delta)?;
            anchor_x.clone_from(&x);
            anchor_v.clone_from(&est.vector);
            est
        } else {
            m.meter().set_phase(Phase::Inner);
            let batch = sample_with_replacement(&mut rng, n, s2);
            match variant.inner {
                Inner::SvrgRand => {
                    let us: Vec<Vec<f64>> = (0..s2).map(|_| sample_unit_sphere(&mut rng, d)).collect();
                    svrg_rand_inner(&m, &batch, &us, &x, &anchor_x, &anchor_v, beta)?
                }
                Inner::SvrgCoord => svrg_coord_inner(&m, &batch, &x, &anchor_x, &anchor_v, delta, exec)?,
                Inner::Spider => spider_coord_step(&m, &batch, &x, &x_prev, &v_prev, delta, exec)?,
            }
        };
        rec.note(&est);
        if !est.is_finite() {
            rec.trace.aborted = Some(format!("non-finite gradient estimate at k = {k}"));
            return Ok(rec.finish(k, x, &m));
        }
        let next = descend(&x, &est.vector, hp.eta, prox);
        if !all_finite(&next) {
            rec.trace.aborted = Some(format!("non-finite iterate at k = {}", k + 1));
            return Ok(rec.finish(k, x, &m));
        }
        x_prev = std::mem::replace(&mut x, next);
        v_prev = est.vector;
    }
    Ok(rec.finish(hp.k + 1, x, &m))
}

/// Full-batch two-point estimate with one shared direction:
/// `d (f(x+βu) − f(x)) / β · u`. Uses `2n` queries.
fn full_batch_two_point(obj: &dyn Objective, x: &[f64], u: &[f64], beta: f64) -> Result<GradientEstimate> {
    let (n, d) = (obj.num_components(), obj.dim());
    let (beta, clamped) = effective_radius("beta", beta, &[x])?;
    let shifted: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + beta * b).collect();
    let mut diff = 0.0;
    for i in 0..n {
        diff += obj.eval_component(i, &shifted) - obj.eval_component(i, x);
    }
    let scale = d as f64 * diff / (n as f64 * beta);
    Ok(GradientEstimate {
        vector: u.iter().map(|v| scale * v).collect(),
        queries_used: 2 * n as u64,
        clamped,
    })
}

fn run_baseline(alg: Algorithm, obj: &dyn Objective, h: Regularizer, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    check_start(obj, hp, opts)?;
    let (n, d) = (obj.num_components(), obj.dim());
    let beta = hp.smoothing.beta;
    let m = metered(obj);
    m.meter().set_phase(Phase::Inner);
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let zeta = rng.random_range(0..=hp.k);
    let mut rec = Recorder::new(alg, obj, h, hp.eta, opts, zeta);
    let mut x = opts.x0.clone();

    for k in 0..=hp.k {
        if rec.over_budget(m.queries()) {
            return Ok(rec.finish(k, x, &m));
        }
        rec.visit(k, m.queries(), &x);
        let est = if alg == Algorithm::ZoGd {
            let u = sample_unit_sphere(&mut rng, d);
            full_batch_two_point(&m, &x, &u, beta)?
        } else {
            let batch = sample_with_replacement(&mut rng, n, hp.s2);
            let us: Vec<Vec<f64>> = (0..hp.s2).map(|_| sample_unit_sphere(&mut rng, d)).collect();
            let mut acc = vec![0.0; d];
            let mut clamped = false;
            for (&a, u) in batch.iter().zip(&us) {
                let e = rand_two_point_estimate(&m, a, &x, u, beta)?;
                clamped |= e.clamped;
                acc.iter_mut().zip(&e.vector).for_each(|(s, g)| *s += g);
            }
            let inv = 1.0 / hp.s2 as f64;
            GradientEstimate {
                vector: acc.into_iter().map(|s| s * inv).collect(),
                queries_used: 2 * hp.s2 as u64,
                clamped,
            }
        };
        rec.note(&est);
        if !est.is_finite() {
            rec.trace.aborted = Some(format!("non-finite gradient estimate at k = {k}"));
            return Ok(rec.finish(k, x, &m));
        }
        let next = descend(&x, &est.vector, hp.eta, None);
        if !all_finite(&next) {
            rec.trace.aborted = Some(format!("non-finite iterate at k = {}", k + 1));
            return Ok(rec.finish(k, x, &m));
        }
        x = next;
    }
    Ok(rec.finish(hp.k + 1, x, &m))
}

const fn variant(inner: Inner, convex: bool, prox: bool) -> Variant {
    Variant { inner, convex, prox }
}

/// ZO-SVRG-Coord-Rand: coordinate anchor, shared-direction two-point inner steps.
pub fn run_zo_svrg_coord_rand(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    let v = variant(Inner::SvrgRand, false, false);
    run_variance_reduced(Algorithm::ZoSvrgCoordRand, v, obj, Regularizer::Zero, hp, opts)
}

/// ZO-SVRG-Coord: coordinate anchor and coordinate inner corrections.
pub fn run_zo_svrg_coord(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    let v = variant(Inner::SvrgCoord, false, false);
    run_variance_reduced(Algorithm::ZoSvrgCoord, v, obj, Regularizer::Zero, hp, opts)
}

/// ZO-SPIDER-Coord: recursive coordinate estimator.
pub fn run_zo_spider_coord(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    let v = variant(Inner::Spider, false, false);
    run_variance_reduced(Algorithm::ZoSpiderCoord, v, obj, Regularizer::Zero, hp, opts)
}

/// PROX-ZO-SPIDER-Coord for `f + h`. Rows report `f + h` and the squared
/// norm of the generalized gradient.
pub fn run_prox_zo_spider_coord(
    obj: &dyn Objective,
    h: &Regularizer,
    hp: &HyperParams,
    opts: &RunOptions,
) -> Result<RunTrace> {
    let v = variant(Inner::Spider, false, true);
    run_variance_reduced(Algorithm::ProxZoSpiderCoord, v, obj, *h, hp, opts)
}

/// ZO-SVRG-Coord-Rand-C. Ignores `hp.s2`: inner steps use one sample.
pub fn run_zo_svrg_coord_rand_c(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    let v = variant(Inner::SvrgRand, true, false);
    run_variance_reduced(Algorithm::ZoSvrgCoordRandC, v, obj, Regularizer::Zero, hp, opts)
}

/// ZO-SPIDER-Coord-C. Ignores `hp.s2`: inner steps use one sample.
pub fn run_zo_spider_coord_c(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    let v = variant(Inner::Spider, true, false);
    run_variance_reduced(Algorithm::ZoSpiderCoordC, v, obj, Regularizer::Zero, hp, opts)
}

/// ZO-GD: one shared direction over the full batch per step (`2n` queries).
pub fn run_zo_gd(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    run_baseline(Algorithm::ZoGd, obj, Regularizer::Zero, hp, opts)
}

/// ZO-SGD: `|S2|` samples, each with its own direction (`2|S2|` queries).
pub fn run_zo_sgd(obj: &dyn Objective, hp: &HyperParams, opts: &RunOptions) -> Result<RunTrace> {
    run_baseline(Algorithm::ZoSgd, obj, Regularizer::Zero, hp, opts)
}

/// Runs `alg`. Only the proximal variant applies `h` in its update; every
/// algorithm reports `f + h` and the generalized gradient so that composite
/// runs are comparable.
pub fn run_algorithm(
    alg: Algorithm,
    obj: &dyn Objective,
    h: &Regularizer,
    hp: &HyperParams,
    opts: &RunOptions,
) -> Result<RunTrace> {
    let h = *h;
    match alg {
        Algorithm::ZoSvrgCoordRand => run_variance_reduced(alg, variant(Inner::SvrgRand, false, false), obj, h, hp, opts),
        Algorithm::ZoSvrgCoord => run_variance_reduced(alg, variant(Inner::SvrgCoord, false, false), obj, h, hp, opts),
        Algorithm::ZoSpiderCoord => run_variance_reduced(alg, variant(Inner::Spider, false, false), obj, h, hp, opts),
        Algorithm::ProxZoSpiderCoord => run_variance_reduced(alg, variant(Inner::Spider, false, true), obj, h, hp, opts),
        Algorithm::ZoSvrgCoordRandC => run_variance_reduced(alg, variant(Inner::SvrgRand, true, false), obj, h, hp, opts),
        Algorithm::ZoSpiderCoordC => run_variance_reduced(alg, variant(Inner::Spider, true, false), obj, h, hp, opts),
        Algorithm::ZoGd | Algorithm::ZoSgd => run_baseline(alg, obj, h, hp, opts),
    }
}
