use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use frdt_core::{sample, solve, Execution, Grid, Problem, ProblemSpec};

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for problem in [Problem::LseCosh, Problem::NlseTrap, Problem::Coupled] {
        let spec = ProblemSpec::with_defaults(problem);
        let solution = solve(&spec).unwrap();
        let x = Grid::new(-10.0, 10.0, 401).unwrap();
        let t = Grid::new(0.0, 0.1, 101).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), problem.name()),
                &exec,
                |b, &exec| b.iter(|| sample(black_box(&solution), x, t, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for problem in [Problem::NlseTrap, Problem::Coupled] {
        let spec = ProblemSpec {
            terms: 20,
            ..ProblemSpec::with_defaults(problem)
        };
        group.bench_function(problem.name(), |b| b.iter(|| solve(black_box(&spec)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_sampling, bench_solve);
criterion_main!(benches);
