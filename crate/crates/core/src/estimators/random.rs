use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_indices, check_len, effective_radius, GradientEstimate};
use crate::error::{Error, Result};
use crate::objectives::{norm_sq, Objective};

const UNIT_TOLERANCE: f64 = 1e-12;

/// Uniform direction on the unit sphere `S^{d−1}`: a standard Gaussian
/// vector normalized to unit length.
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let mut u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = norm_sq(&u).sqrt();
        if norm > 0.0 && norm.is_finite() {
            u.iter_mut().for_each(|v| *v /= norm);
            return u;
        }
    }
}

fn check_unit(u: &[f64]) -> Result<()> {
    let norm = norm_sq(u).sqrt();
    if (norm - 1.0).abs() <= UNIT_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NonUnitDirection(norm))
    }
}

fn shifted(x: &[f64], u: &[f64], beta: f64) -> Vec<f64> {
    x.iter().zip(u).map(|(a, b)| a + beta * b).collect()
}

/// Two-point random estimate `d (f_a(x+βu) − f_a(x)) / β · u`. Uses 2 queries.
pub fn rand_two_point_estimate(
    obj: &dyn Objective,
    sample_index: usize,
    x: &[f64],
    u: &[f64],
    beta: f64,
) -> Result<GradientEstimate> {
    let d = obj.dim();
    check_len("x", x, d)?;
    check_len("u", u, d)?;
    check_unit(u)?;
    check_indices(&[sample_index], obj.num_components())?;
    let (beta, clamped) = effective_radius("beta", beta, &[x])?;
    let diff = obj.eval_component(sample_index, &shifted(x, u, beta)) - obj.eval_component(sample_index, x);
    let scale = d as f64 * diff / beta;
    Ok(GradientEstimate {
        vector: u.iter().map(|v| scale * v).collect(),
        queries_used: 2,
        clamped,
    })
}

/// ZO-SVRG-Coord-Rand inner estimate:
///
/// `v = (1/m) Σ_j [∇̂_rand f_{a_j}(x_k; u_j) − ∇̂_rand f_{a_j}(x_anchor; u_j)] + anchor_grad`
///
/// Each direction `u_j` is shared by the two points. Every `f_{a_j}`
/// evaluation is made afresh, so the cost is `4m` queries.
pub fn svrg_rand_inner(
    obj: &dyn Objective,
    batch: &[usize],
    us: &[Vec<f64>],
    x_k: &[f64],
    x_anchor: &[f64],
    anchor_grad: &[f64],
    beta: f64,
) -> Result<GradientEstimate> {
    let d = obj.dim();
    if batch.len() != us.len() {
        return Err(Error::LengthMismatch {
            what: "batch vs directions",
            left: batch.len(),
            right: us.len(),
        });
    }
    check_len("x_k", x_k, d)?;
    check_len("x_anchor", x_anchor, d)?;
    check_len("anchor_grad", anchor_grad, d)?;
    check_indices(batch, obj.num_components())?;
    for u in us {
        check_len("u", u, d)?;
        check_unit(u)?;
    }
    let (beta, clamped) = effective_radius("beta", beta, &[x_k, x_anchor])?;
    let mut acc = vec![0.0; d];
    for (&a, u) in batch.iter().zip(us) {
        let at_k = obj.eval_component(a, &shifted(x_k, u, beta)) - obj.eval_component(a, x_k);
        let at_anchor = obj.eval_component(a, &shifted(x_anchor, u, beta)) - obj.eval_component(a, x_anchor);
        let coef = d as f64 * (at_k - at_anchor) / beta;
        for (s, ui) in acc.iter_mut().zip(u) {
            *s += coef * ui;
        }
    }
    let m = batch.len() as f64;
    let vector = anchor_grad.iter().zip(&acc).map(|(g, s)| g + s / m).collect();
    Ok(GradientEstimate {
        vector,
        queries_used: 4 * batch.len() as u64,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_io::make_synthetic_logreg_data;
    use crate::objectives::{
        analytic_batch_gradient, analytic_gradient, make_nonconvex_logreg, make_quadratic, metered, ConstantObjective,
        LinearObjective,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_samples_are_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..20 {
            let u = sample_unit_sphere(&mut rng, d);
            assert!((norm_sq(&u).sqrt() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn one_dimensional_sphere_is_a_fair_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let plus = (0..10_000)
            .filter(|_| {
                let u = sample_unit_sphere(&mut rng, 1);
                assert!(u[0] == 1.0 || u[0] == -1.0);
                u[0] > 0.0
            })
            .count();
        let freq = plus as f64 / 1e4;
        assert!((0.47..=0.53).contains(&freq), "{freq}");
    }

    #[test]
    fn second_moment_is_identity_over_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (d, draws) = (3, 100_000);
        let mut m = [[0.0; 3]; 3];
        for _ in 0..draws {
            let u = sample_unit_sphere(&mut rng, d);
            for i in 0..d {
                for j in 0..d {
                    m[i][j] += u[i] * u[j] / draws as f64;
                }
            }
        }
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert!((v - target).abs() <= 0.01);
            }
        }
    }

    #[test]
    fn two_point_basics() {
        let c = ConstantObjective::new(1, 2, 3.0);
        let e = rand_two_point_estimate(&c, 0, &[1.0, 1.0], &[0.6, 0.8], 0.1).unwrap();
        assert_eq!(e.vector, vec![0.0, 0.0]);
        assert_eq!(e.queries_used, 2);

        let lin = LinearObjective::new(vec![2.5]);
        let e = rand_two_point_estimate(&lin, 0, &[0.75], &[1.0], 0.5).unwrap();
        assert_eq!(e.vector, vec![2.5]);
    }

    #[test]
    fn two_point_rejects_bad_input() {
        let c = ConstantObjective::new(1, 2, 3.0);
        assert!(matches!(
            rand_two_point_estimate(&c, 0, &[0.0; 2], &[1.0, 1.0], 0.1),
            Err(Error::NonUnitDirection(_))
        ));
        assert!(matches!(
            rand_two_point_estimate(&c, 0, &[0.0; 2], &[1.0, 0.0], -0.1),
            Err(Error::InvalidSmoothing { .. })
        ));
    }

    #[test]
    fn two_point_is_unbiased_on_quadratics() {
        // For quadratics the smoothed gradient equals the true gradient.
        let q = make_quadratic(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], &[0.0; 3]).unwrap();
        let x = [0.5, -1.0, 2.0];
        let g = analytic_gradient(&q, &x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 100_000;
        let mut sum = [0.0; 3];
        let mut sum_sq = [0.0; 3];
        for _ in 0..draws {
            let u = sample_unit_sphere(&mut rng, 3);
            let e = rand_two_point_estimate(&q, 0, &x, &u, 0.01).unwrap();
            for i in 0..3 {
                sum[i] += e.vector[i];
                sum_sq[i] += e.vector[i] * e.vector[i];
            }
        }
        for i in 0..3 {
            let mean = sum[i] / draws as f64;
            let var = sum_sq[i] / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt();
            assert!((mean - g[i]).abs() <= 4.0 * se, "coord {i}: {mean} vs {}", g[i]);
        }
    }

    fn tiny_logreg() -> crate::objectives::NonconvexLogReg {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let data = make_synthetic_logreg_data(&mut rng, 3, 2, 1.0);
        make_nonconvex_logreg(&data, 2, 0.1).unwrap()
    }

    #[test]
    fn svrg_rand_inner_identities() {
        let obj = tiny_logreg();
        let u = vec![vec![0.6, 0.8], vec![-1.0, 0.0]];
        let x = [0.3, -0.4];
        let anchor = [1.5, -2.5];
        let v = svrg_rand_inner(&obj, &[0, 2], &u, &x, &x, &anchor, 0.01).unwrap();
        assert_eq!(v.vector, anchor.to_vec());
        let c = ConstantObjective::new(3, 2, 1.0);
        let v = svrg_rand_inner(&c, &[0, 2], &u, &[0.0, 1.0], &x, &anchor, 0.01).unwrap();
        assert_eq!(v.vector, anchor.to_vec());
        assert!(matches!(
            svrg_rand_inner(&obj, &[0], &u, &x, &x, &anchor, 0.01),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn svrg_rand_inner_counts_four_queries_per_sample() {
        let obj = tiny_logreg();
        let m = metered(&obj);
        let u = vec![vec![0.6, 0.8], vec![0.0, 1.0], vec![1.0, 0.0]];
        let v = svrg_rand_inner(&m, &[0, 1, 1], &u, &[0.1, 0.2], &[0.3, 0.4], &[0.0, 0.0], 0.01).unwrap();
        assert_eq!(v.queries_used, 12);
        assert_eq!(m.queries(), 12);
    }

    #[test]
    fn svrg_rand_inner_matches_enumerated_expectation() {
        // Average over the three equally likely samples, fixed direction.
        let obj = tiny_logreg();
        let u = vec![vec![0.6, -0.8]];
        let (xk, xa, anchor) = ([0.5, 0.1], [-0.2, 0.3], [0.7, 0.9]);
        let beta = 0.01;
        let mut mean = [0.0; 2];
        for a in 0..3 {
            let v = svrg_rand_inner(&obj, &[a], &u, &xk, &xa, &anchor, beta).unwrap();
            for i in 0..2 {
                mean[i] += v.vector[i] / 3.0;
            }
        }
        // Independent route: full-objective two-point differences.
        let f = |x: &[f64]| crate::objectives::full_value(&obj, x);
        let diff = |x: &[f64]| {
            let p: Vec<f64> = x.iter().zip(&u[0]).map(|(a, b)| a + beta * b).collect();
            2.0 * (f(&p) - f(x)) / beta
        };
        let coef = diff(&xk) - diff(&xa);
        for i in 0..2 {
            assert!((mean[i] - (anchor[i] + coef * u[0][i])).abs() < 1e-10);
        }
        let _ = analytic_batch_gradient(&obj, &[0], &xk).unwrap();
    }
}
