use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvpm_core::pipeline::{solve, SolveMode};
use tvpm_core::random::{random_separable_configuration, ColoringKind};
use tvpm_core::solver::enumerate_partitions;
use tvpm_core::verify::oracle_enumerate;

const SHAPES: &[(usize, usize)] = &[(1, 2), (2, 2), (1, 3), (2, 3)];

fn plus_minus(c: &mut Criterion) {
    let mut group = c.benchmark_group("plus_minus_partition");
    for &(d, r) in SHAPES {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let config = random_separable_configuration(&mut rng, d, r, r - 1, ColoringKind::None);
        group.bench_with_input(BenchmarkId::from_parameter(format!("d{d}r{r}")), &config, |b, config| {
            b.iter(|| solve(config, SolveMode::PlusMinus).unwrap())
        });
    }
    group.finish();
}

fn corollary(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let config = random_separable_configuration(&mut rng, 2, 3, 2, ColoringKind::None);
    c.bench_function("corollary_d2r3", |b| b.iter(|| solve(&config, SolveMode::Corollary).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let config = random_separable_configuration(&mut rng, 2, 3, 2, ColoringKind::None);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("oracle_enumerate_d2r3", |b| b.iter(|| oracle_enumerate(&config)));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_partitions");
    for n in [7usize, 9, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| enumerate_partitions(n, 3, None)));
    }
    group.finish();
}

criterion_group!(benches, plus_minus, corollary, oracle, enumeration);
criterion_main!(benches);
