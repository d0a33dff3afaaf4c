use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use kwclass_bench::{keyword, table_cases};
use kwclass_core::settings::Settings;
use kwclass_core::{canonical_histogram, size1_series_gf, ClassPartition};

fn partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("partition");
    group.sample_size(10);
    for (a, n) in table_cases() {
        for workers in [1, 4] {
            let settings = Settings::default().with_workers(workers);
            group.bench_with_input(
                BenchmarkId::new(format!("{a}/n={n}"), workers),
                &(a, n),
                |b, (a, n)| b.iter(|| ClassPartition::build(black_box(a), *n, &settings).unwrap()),
            );
        }
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_histogram");
    group.sample_size(10);
    for (a, n) in [("10000", 14), ("101", 10), ("01", 10)] {
        let a = keyword(a);
        group.bench_function(format!("{a}/n={n}"), |b| {
            b.iter(|| canonical_histogram(black_box(&a), n).unwrap())
        });
    }
    group.finish();
}

fn series(c: &mut Criterion) {
    let a = keyword("10001");
    c.bench_function("size1_series_gf/10001/n=500", |b| {
        b.iter(|| size1_series_gf(black_box(&a), 500))
    });
}

criterion_group!(benches, partition, canonical, series);
criterion_main!(benches);
