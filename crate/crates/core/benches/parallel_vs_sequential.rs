use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zovr::data_io::make_synthetic_logreg_data;
use zovr::estimators::coord_estimate_in;
use zovr::objectives::{make_nonconvex_logreg, NonconvexLogReg};
use zovr::optimizers::{run_algorithm, select_params, Algorithm, Corollary, Regularizer, RunOptions};
use zovr::parallel::Execution;
use zovr::verification::monte_carlo;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn problem(n: usize, d: usize) -> NonconvexLogReg {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data = make_synthetic_logreg_data(&mut rng, n, d, 2.0);
    make_nonconvex_logreg(&data, d, 0.1).unwrap()
}

fn coordinate_estimator(c: &mut Criterion) {
    let mut group = c.benchmark_group("coord_estimate");
    for d in [64, 512] {
        let obj = problem(200, d);
        let samples: Vec<usize> = (0..200).collect();
        let x = vec![0.1; d];
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, d), &d, |b, _| {
                b.iter(|| coord_estimate_in(exec, &obj, black_box(&samples), black_box(&x), 1e-3).unwrap())
            });
        }
    }
    group.finish();
}

fn monte_carlo_shards(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                monte_carlo(exec, 200_000, 7, |rng: &mut ChaCha8Rng| {
                    let u: f64 = rng.random();
                    vec![u.sin(), u * u]
                })
            })
        });
    }
    group.finish();
}

fn spider_run(c: &mut Criterion) {
    let obj = problem(400, 100);
    let hp = select_params(Corollary::Cor3, 400, 100, 60, 1.0);
    let mut group = c.benchmark_group("zo_spider_coord_run");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut opts = RunOptions::new(vec![0.0; 100]);
        opts.exec = exec;
        group.bench_function(name, |b| {
            b.iter(|| run_algorithm(Algorithm::ZoSpiderCoord, &obj, &Regularizer::Zero, &hp, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, coordinate_estimator, monte_carlo_shards, spider_run);
criterion_main!(benches);
