use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use charsum::{
    g_direct, hyper_mellin, theorem_rhs, theorem_tuples, FieldTable, GForm, GaussTable,
    MulCharacter,
};

fn field(p: u32, n: u32) -> Arc<FieldTable> {
    Arc::new(FieldTable::build(p, n, None).unwrap())
}

fn bench_field_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("field_build");
    for (p, n) in [(101u32, 1u32), (3, 7), (2, 13)] {
        let q = (p as u64).pow(n);
        group.bench_with_input(BenchmarkId::from_parameter(q), &(p, n), |b, &(p, n)| {
            b.iter(|| FieldTable::build(p, n, None).unwrap())
        });
    }
    group.finish();
}

fn bench_gauss_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_table_build");
    for p in [101u32, 257, 1009] {
        let f = field(p, 1);
        group.bench_with_input(BenchmarkId::from_parameter(p), &f, |b, f| {
            b.iter(|| GaussTable::build(f))
        });
    }
    group.finish();
}

fn bench_g_paths(c: &mut Criterion) {
    let f = field(101, 1);
    let gauss = GaussTable::build(&f);
    let chi = MulCharacter::new(f.clone(), 3).unwrap();
    let eta = MulCharacter::new(f.clone(), 7).unwrap();
    let mut group = c.benchmark_group("g_q101");
    group.bench_function("direct", |b| {
        b.iter(|| g_direct(&chi, &eta, GForm::Product).unwrap())
    });
    group.bench_function("theorem_rhs_mellin", |b| {
        b.iter(|| theorem_rhs(&chi, &eta, &gauss).unwrap())
    });
    group.finish();
}

fn bench_hyper_mellin(c: &mut Criterion) {
    let f = field(101, 1);
    let gauss = GaussTable::build(&f);
    let chi = MulCharacter::new(f.clone(), 3).unwrap();
    let eta = MulCharacter::new(f.clone(), 7).unwrap();
    let (chi_t, eta_t) = theorem_tuples(&chi, &eta).unwrap();
    c.bench_function("hyper_mellin_q101", |b| {
        b.iter(|| hyper_mellin(1, &chi_t, &eta_t, &gauss).unwrap())
    });
}

criterion_group!(
    benches,
    bench_field_build,
    bench_gauss_table,
    bench_g_paths,
    bench_hyper_mellin
);
criterion_main!(benches);
