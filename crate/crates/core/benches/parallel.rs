use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use levelraise::analytic::ihara_rank_test;
use levelraise::cosets::{ihara_kernel_test, random_biregular};
use levelraise::kernel::{int, rational, Matrix};
use levelraise::lparam::components_through;
use levelraise::tree::TreeBall;
use levelraise::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn tree_composition(c: &mut Criterion) {
    let ball = TreeBall::build(3, 4).unwrap();
    let mut group = c.benchmark_group("tree_composition_l3_r4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| ball.verify_composition(exec))
        });
    }
    group.finish();
}

fn ihara_sweep(c: &mut Criterion) {
    let g = random_biregular(2, 3, 7).unwrap();
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23];
    let mut group = c.benchmark_group("ihara_prime_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                exec.map(&primes, |&p| {
                    ihara_kernel_test(&g, p, None).unwrap().passed()
                })
            })
        });
    }
    group.finish();
}

fn rank_table(c: &mut Criterion) {
    let delta = rational(1, 8);
    let mut group = c.benchmark_group("analytic_rank_d6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| ihara_rank_test(6, &delta, exec))
        });
    }
    group.finish();
}

fn components(c: &mut Criterion) {
    let s = Matrix::diagonal(&[int(27), int(9), int(9), int(3), int(1)], ());
    let l = int(3);
    let mut group = c.benchmark_group("components_gl5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| components_through(&s, &l, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    tree_composition,
    ihara_sweep,
    rank_table,
    components
);
criterion_main!(benches);
