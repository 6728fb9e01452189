//! Parallel against sequential execution of the explorer's hot loops.
//!
//! Both arms run the same code; the sequential arm installs a one-thread
//! rayon pool, which is what the loops reduce to without the `parallel`
//! feature.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use flipcalc::explorer::{enumerate_forms, orbit, EnumerateOptions, MoveSet, OrbitOptions};

fn pools() -> [(&'static str, rayon::ThreadPool); 2] {
    [
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
        (
            "sequential",
            ThreadPoolBuilder::new().num_threads(1).build().unwrap(),
        ),
    ]
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_forms");
    group.sample_size(10);
    for (name, pool) in pools() {
        for v in [4, 6] {
            group.bench_with_input(BenchmarkId::new(name, v), &v, |b, &v| {
                b.iter(|| pool.install(|| enumerate_forms(v, EnumerateOptions::default()).unwrap()))
            });
        }
    }
    group.finish();
}

fn orbits(c: &mut Criterion) {
    // the orbit fills the whole (genus, punctures) class of this form
    let m = enumerate_forms(6, EnumerateOptions::default()).unwrap()[0].to_marked();
    let opts = OrbitOptions::default();
    let mut group = c.benchmark_group("orbit_v6");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| pool.install(|| orbit(&m, MoveSet::FLIP_DOE, opts).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, orbits);
criterion_main!(benches);
