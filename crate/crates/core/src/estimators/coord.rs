use super::{check_indices, check_len, effective_radius, GradientEstimate};
use crate::error::Result;
use crate::objectives::Objective;
use crate::parallel::Execution;

/// `Σ_{j∈S} (f_j(x+δe_i) − f_j(x−δe_i))` for every coordinate `i`.
///
/// Per-coordinate work is independent, so it fans out over coordinates;
/// the sum over samples always runs in sample order.
fn central_sums(obj: &dyn Objective, samples: &[usize], x: &[f64], delta: f64, exec: Execution) -> Vec<f64> {
    exec.map_range(x.len(), |i| {
        let mut p = x.to_vec();
        let mut acc = 0.0;
        for &j in samples {
            p[i] = x[i] + delta;
            let up = obj.eval_component(j, &p);
            p[i] = x[i] - delta;
            let down = obj.eval_component(j, &p);
            acc += up - down;
        }
        acc
    })
}

/// Coordinate-wise central-difference estimate of `∇f_S(x)` over the sample
/// multiset `samples`. Uses `2·d·|S|` queries.
pub fn coord_estimate(obj: &dyn Objective, samples: &[usize], x: &[f64], delta: f64) -> Result<GradientEstimate> {
    coord_estimate_in(Execution::Sequential, obj, samples, x, delta)
}

/// [`coord_estimate`] with an explicit execution strategy.
pub fn coord_estimate_in(
    exec: Execution,
    obj: &dyn Objective,
    samples: &[usize],
    x: &[f64],
    delta: f64,
) -> Result<GradientEstimate> {
    let d = obj.dim();
    check_len("x", x, d)?;
    check_indices(samples, obj.num_components())?;
    let (delta, clamped) = effective_radius("delta", delta, &[x])?;
    let scale = 2.0 * delta * samples.len() as f64;
    let vector = central_sums(obj, samples, x, delta, exec)
        .into_iter()
        .map(|s| s / scale)
        .collect();
    Ok(GradientEstimate {
        vector,
        queries_used: 2 * (d * samples.len()) as u64,
        clamped,
    })
}

/// `base + ∇̂_coord f_S(a) − ∇̂_coord f_S(b)`, with both estimates using
/// the same radius. When `a == b` the difference is exactly zero.
fn corrected_difference(
    exec: Execution,
    obj: &dyn Objective,
    batch: &[usize],
    a: &[f64],
    b: &[f64],
    base: &[f64],
    delta: f64,
) -> Result<GradientEstimate> {
    let d = obj.dim();
    check_len("x_k", a, d)?;
    check_len("reference point", b, d)?;
    check_len("base estimate", base, d)?;
    check_indices(batch, obj.num_components())?;
    let (delta, clamped) = effective_radius("delta", delta, &[a, b])?;
    let at_a = central_sums(obj, batch, a, delta, exec);
    let at_b = central_sums(obj, batch, b, delta, exec);
    let scale = 2.0 * delta * batch.len() as f64;
    let vector = base
        .iter()
        .zip(at_a.iter().zip(&at_b))
        .map(|(v, (sa, sb))| v + (sa - sb) / scale)
        .collect();
    Ok(GradientEstimate {
        vector,
        queries_used: 4 * (d * batch.len()) as u64,
        clamped,
    })
}

/// ZO-SVRG-Coord inner estimate:
/// `v = ∇̂_coord f_B(x_k) − ∇̂_coord f_B(x_anchor) + anchor_grad`.
/// Uses `4·d·|B|` queries.
pub fn svrg_coord_inner(
    obj: &dyn Objective,
    batch: &[usize],
    x_k: &[f64],
    x_anchor: &[f64],
    anchor_grad: &[f64],
    delta: f64,
    exec: Execution,
) -> Result<GradientEstimate> {
    corrected_difference(exec, obj, batch, x_k, x_anchor, anchor_grad, delta)
}

/// ZO-SPIDER-Coord recursion:
/// `v = ∇̂_coord f_B(x_k) − ∇̂_coord f_B(x_prev) + v_prev`.
/// Uses `4·d·|B|` queries.
pub fn spider_coord_step(
    obj: &dyn Objective,
    batch: &[usize],
    x_k: &[f64],
    x_prev: &[f64],
    v_prev: &[f64],
    delta: f64,
    exec: Execution,
) -> Result<GradientEstimate> {
    corrected_difference(exec, obj, batch, x_k, x_prev, v_prev, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_io::make_synthetic_logreg_data;
    use crate::error::Error;
    use crate::objectives::{
        analytic_batch_gradient, analytic_gradient, make_nonconvex_logreg, make_quadratic, metered,
        random_quadratic_sum, ConstantObjective, NonconvexLogReg,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SEQ: Execution = Execution::Sequential;

    fn small_logreg(seed: u64, n: usize, d: usize) -> NonconvexLogReg {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = make_synthetic_logreg_data(&mut rng, n, d, 1.0);
        make_nonconvex_logreg(&data, d, 0.1).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()
    }

    #[test]
    fn constant_objective_gives_zero() {
        let c = ConstantObjective::new(4, 3, 7.0);
        let e = coord_estimate(&c, &[0, 1, 3], &[0.5, -2.0, 1.0], 0.01).unwrap();
        assert_eq!(e.vector, vec![0.0; 3]);
    }

    #[test]
    fn exact_on_half_squared_norm() {
        let q = make_quadratic(&[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0]).unwrap();
        let e = coord_estimate(&q, &[0], &[1.0, 2.0], 0.1).unwrap();
        for (a, b) in e.vector.iter().zip([1.0, 2.0]) {
            assert!((a - b).abs() <= 1e-14, "{a}");
        }
    }

    #[test]
    fn bias_within_coordinate_bound() {
        let obj = small_logreg(1, 1, 4);
        let l = obj.metadata().smoothness_l.unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = random_point(&mut rng, 4);
            let e = coord_estimate(&obj, &[0], &x, 1e-3).unwrap();
            let g = analytic_gradient(&obj, &x).unwrap();
            let err: f64 = e.vector.iter().zip(&g).map(|(a, b)| (a - b).powi(2)).sum();
            assert!(err <= l * l * 4.0 * 1e-6);
        }
    }

    #[test]
    fn query_count_matches_meter() {
        let obj = small_logreg(3, 6, 4);
        let m = metered(&obj);
        let all: Vec<usize> = (0..6).collect();
        let e = coord_estimate(&m, &all, &[0.1; 4], 1e-3).unwrap();
        assert_eq!(e.queries_used, 48);
        assert_eq!(m.queries(), 48);
        let before = m.queries();
        let e = spider_coord_step(&m, &[1, 1, 4], &[0.2; 4], &[0.1; 4], &[0.0; 4], 1e-3, SEQ).unwrap();
        assert_eq!(m.queries() - before, e.queries_used);
        assert_eq!(e.queries_used, 4 * 4 * 3);
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let obj = small_logreg(4, 30, 12);
        let all: Vec<usize> = (0..30).collect();
        let x = vec![0.3; 12];
        let a = coord_estimate_in(Execution::Sequential, &obj, &all, &x, 1e-4).unwrap();
        let b = coord_estimate_in(Execution::Parallel, &obj, &all, &x, 1e-4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let c = ConstantObjective::new(2, 2, 0.0);
        assert!(matches!(coord_estimate(&c, &[], &[0.0; 2], 0.1), Err(Error::EmptySampleSet)));
        assert!(matches!(coord_estimate(&c, &[0], &[0.0; 2], 0.0), Err(Error::InvalidSmoothing { .. })));
        assert!(matches!(coord_estimate(&c, &[5], &[0.0; 2], 0.1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(coord_estimate(&c, &[0], &[0.0; 3], 0.1), Err(Error::LengthMismatch { .. })));
        assert!(svrg_coord_inner(&c, &[0], &[0.0; 2], &[0.0; 2], &[0.0], 0.1, SEQ).is_err());
    }

    #[test]
    fn svrg_inner_at_anchor_returns_anchor_grad() {
        let obj = small_logreg(5, 5, 3);
        let x = [0.4, -0.7, 1.1];
        let anchor = [0.123, -4.5, 6.0];
        let v = svrg_coord_inner(&obj, &[0, 2, 2], &x, &x, &anchor, 1e-3, SEQ).unwrap();
        assert_eq!(v.vector, anchor.to_vec());
    }

    #[test]
    fn svrg_inner_exact_on_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q = random_quadratic_sum(&mut rng, 5, 3, 4.0, 0.5);
        let (xk, xa) = (random_point(&mut rng, 3), random_point(&mut rng, 3));
        let anchor = [1.0, 2.0, 3.0];
        let batch = [4, 0, 4];
        let v = svrg_coord_inner(&q, &batch, &xk, &xa, &anchor, 0.1, SEQ).unwrap();
        let gk = analytic_batch_gradient(&q, &batch, &xk).unwrap();
        let ga = analytic_batch_gradient(&q, &batch, &xa).unwrap();
        for i in 0..3 {
            assert!((v.vector[i] - (gk[i] - ga[i] + anchor[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn spider_step_identities() {
        let obj = small_logreg(7, 4, 2);
        let v_prev = [0.25, -1.5];
        let x = [0.3, 0.9];
        assert_eq!(spider_coord_step(&obj, &[1], &x, &x, &v_prev, 1e-3, SEQ).unwrap().vector, v_prev.to_vec());

        let q = make_quadratic(&[2.0, 0.5, 0.5, 1.0], &[0.1, 0.2]).unwrap();
        let (xk, xp) = ([1.0, -1.0], [0.5, 0.25]);
        let v = spider_coord_step(&q, &[0, 0], &xk, &xp, &v_prev, 0.05, SEQ).unwrap();
        let expected = [2.0 * 0.5 + 0.5 * -1.25 + 0.25, 0.5 * 0.5 + 1.0 * -1.25 - 1.5];
        for i in 0..2 {
            assert!((v.vector[i] - expected[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn spider_step_is_a_martingale_increment() {
        // Enumerate the three equally likely single-sample batches.
        let obj = small_logreg(8, 3, 2);
        let (xk, xp, vp) = ([0.7, -0.2], [0.1, 0.4], [0.3, 0.3]);
        let delta = 1e-3;
        let mut mean = [0.0; 2];
        for a in 0..3 {
            let v = spider_coord_step(&obj, &[a], &xk, &xp, &vp, delta, SEQ).unwrap();
            for i in 0..2 {
                mean[i] += v.vector[i] / 3.0;
            }
        }
        let all = [0, 1, 2];
        let gk = coord_estimate(&obj, &all, &xk, delta).unwrap().vector;
        let gp = coord_estimate(&obj, &all, &xp, delta).unwrap().vector;
        for i in 0..2 {
            assert!((mean[i] - (gk[i] - gp[i] + vp[i])).abs() < 1e-10);
        }
    }

    #[test]
    fn full_batch_estimate_is_deterministic() {
        let obj = small_logreg(9, 6, 3);
        let all: Vec<usize> = (0..6).collect();
        let a = coord_estimate(&obj, &all, &[0.1, 0.2, 0.3], 1e-3).unwrap();
        let b = coord_estimate(&obj, &all, &[0.1, 0.2, 0.3], 1e-3).unwrap();
        assert_eq!(a.vector, b.vector);
    }
}
