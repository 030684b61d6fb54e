use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use monocat::catalog::verify_catalog;
use monocat::valuated::enumerate_irretractable_trees_with;
use monocat::Exec;

fn modes() -> [(&'static str, Exec); 2] {
    [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)]
}

fn catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_catalog_n5_p2");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(name, |b| b.iter(|| black_box(verify_catalog(5, 2, exec, 0).unwrap())));
    }
    g.finish();
}

fn trees(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_trees_n5_max7");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(name, |b| {
            b.iter(|| black_box(enumerate_irretractable_trees_with(5, 7, exec, &|_, _| {})))
        });
    }
    g.finish();
}

criterion_group!(benches, catalog, trees);
criterion_main!(benches);
