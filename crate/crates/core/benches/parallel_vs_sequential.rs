use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ensemble_verify::analytic::build_edney1;
use ensemble_verify::concentration::{mc_orthogonality, McParams};
use ensemble_verify::gas::DEFAULT_GAMMA;
use ensemble_verify::geometry::{pairwise_angles, GridVector};
use ensemble_verify::grid::GridSpec;
use ensemble_verify::par::Exec;
use ensemble_verify::solver::{Problem, SchemeConfig, SchemeId, Solver};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn solver_steps(c: &mut Criterion) {
    let grid = GridSpec::unit(100, 100).unwrap();
    let case = build_edney1(4.0, 20.0, 15.0, DEFAULT_GAMMA, &grid).unwrap();
    let problem = Problem::from_case(&case, &grid).unwrap();
    let mut group = c.benchmark_group("solver_10_steps_100x100");
    group.sample_size(10);
    for id in [SchemeId::Cir1, SchemeId::MusclHllc2, SchemeId::Weno3] {
        let cfg = SchemeConfig::new(id);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(id.name(), name), &exec, |b, &exec| {
                b.iter(|| {
                    let mut s = Solver::new(&cfg, &problem, exec).unwrap();
                    for _ in 0..10 {
                        black_box(s.step().unwrap().dt);
                    }
                })
            });
        }
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_orthogonality_1e5");
    group.sample_size(10);
    let p = McParams::new(10_000, 100_000, 0.05, 1);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(mc_orthogonality(&p, exec).unwrap().exceedances)));
    }
    group.finish();
}

fn angles(c: &mut Criterion) {
    let vectors: Vec<GridVector> = (0..13)
        .map(|k| GridVector::from_values((0..40_000).map(|i| ((i * (k + 3)) as f64 * 0.37).sin()).collect()))
        .collect();
    let mut group = c.benchmark_group("pairwise_angles_13x40000");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(pairwise_angles(&vectors, false, exec).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, solver_steps, monte_carlo, angles);
criterion_main!(benches);
