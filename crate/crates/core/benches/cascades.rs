use bureau::blowup::{regularize, Options};
use bureau::catalog;
use bureau::fixtures;
use bureau::par::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    if Exec::available() {
        m.push(("parallel", Exec::Parallel));
    }
    m
}

fn cascades(c: &mut Criterion) {
    let systems: Vec<_> = catalog::all().into_iter().map(|e| e.system).collect();
    let mut g = c.benchmark_group("regularize catalog");
    g.sample_size(10);
    for (name, exec) in modes() {
        let opts = Options { exec, ..Options::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for s in &systems {
                    regularize(s, &opts).unwrap();
                }
            })
        });
    }
    g.finish();
}

fn fixture_suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("fixture suite");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| fixtures::run(exec)));
    }
    g.finish();
}

criterion_group!(benches, cascades, fixture_suite);
criterion_main!(benches);
