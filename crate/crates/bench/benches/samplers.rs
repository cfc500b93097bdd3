use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rrtlab_bench::{level_fdd, SIZES};
use rrtlab_core::coalescent::{run_kingman, TrackedCoalescent};
use rrtlab_core::empirical::count_measures;
use rrtlab_core::rng::seeded;
use rrtlab_core::tree::{grow_rrt_into, RecursiveTree};

fn grow(c: &mut Criterion) {
    let mut g = c.benchmark_group("grow_rrt");
    for n in SIZES {
        g.throughput(Throughput::Elements(n as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut rng = seeded(1);
            let mut tree = RecursiveTree::singleton();
            b.iter(|| grow_rrt_into(&mut tree, n, &mut rng).unwrap());
        });
    }
    g.finish();
}

fn kingman(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_kingman");
    for n in SIZES {
        g.throughput(Throughput::Elements(n as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut rng = seeded(2);
            b.iter(|| run_kingman(n, &mut rng, &[1, 2]).unwrap());
        });
    }
    g.finish();
}

fn tracked(c: &mut Criterion) {
    let mut g = c.benchmark_group("tracked_coalescent");
    for k in [1usize, 2, 4] {
        g.bench_with_input(BenchmarkId::new("full", k), &k, |b, &k| {
            let mut s = TrackedCoalescent::new(1 << 20, k, 193).unwrap();
            let mut rng = seeded(3);
            b.iter(|| s.sample(&mut rng, &[]));
        });
    }
    g.bench_function("reject_degree_20", |b| {
        let mut s = TrackedCoalescent::new(1 << 20, 1, 193).unwrap();
        let mut rng = seeded(4);
        b.iter(|| s.sample(&mut rng, &[20]));
    });
    g.finish();
}

fn counting(c: &mut Criterion) {
    let fdd = level_fdd();
    let mut tree = RecursiveTree::singleton();
    grow_rrt_into(&mut tree, 1 << 18, &mut seeded(5)).unwrap();
    c.bench_function("count_measures_2^18", |b| b.iter(|| count_measures(&tree, &fdd)));
}

criterion_group!(benches, grow, kingman, tracked, counting);
criterion_main!(benches);
