use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use selfdual::counting::{lambda_plus2, lambda_plus3, lambda_plus4, lambda_plus4c};
use selfdual::{classify, generate_layer, BaseSpace, Budget, IntervalCounter};

fn layers(c: &mut Criterion) {
    let mut group = c.benchmark_group("layers");
    for n in [4, 5] {
        group.bench_with_input(BenchmarkId::new("generate", n), &n, |b, &n| {
            b.iter(|| generate_layer(n).unwrap())
        });
    }
    let d5 = generate_layer(5).unwrap();
    group.bench_function("classify/5", |b| b.iter(|| classify(&d5).unwrap()));
    group.finish();
}

fn intervals(c: &mut Criterion) {
    c.bench_function("interval_counter/5", |b| {
        b.iter(|| {
            let counter = IntervalCounter::new(5).unwrap();
            counter.count(0, u32::MAX as u64)
        })
    });
}

fn methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda");
    group.sample_size(10);
    let s3 = BaseSpace::prepare(3, &Budget::unlimited()).unwrap();
    let s4 = BaseSpace::prepare(4, &Budget::unlimited()).unwrap();
    group.bench_function("plus2/base4", |b| {
        b.iter(|| lambda_plus2(&s4).unwrap().value)
    });
    group.bench_function("plus3/base4", |b| {
        b.iter(|| lambda_plus3(&s4).unwrap().value)
    });
    group.bench_function("plus4/base3", |b| {
        b.iter(|| lambda_plus4(&s3).unwrap().value)
    });
    group.bench_function("plus4c/base3", |b| {
        b.iter(|| lambda_plus4c(&s3).unwrap().value)
    });
    group.finish();
}

criterion_group!(benches, layers, intervals, methods);
criterion_main!(benches);
