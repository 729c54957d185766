use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use cyclolab_core::bqf::{class_number, fundamental_unit};
use cyclolab_core::characters::characters_of_subfield;
use cyclolab_core::galmod::{run_enumeration, solve_e1_e2, EnumCheck, EnumLimits};
use cyclolab_core::genus::{solve_conic, DEFAULT_CONIC_BOUND};
use cyclolab_core::minusclass::h_minus;

fn forms(c: &mut Criterion) {
    c.bench_function("class_number 13693", |b| b.iter(|| class_number(black_box(13693)).unwrap()));
    c.bench_function("class_number -99991", |b| b.iter(|| class_number(black_box(-99991)).unwrap()));
    c.bench_function("fundamental_unit 1765", |b| b.iter(|| fundamental_unit(black_box(1765)).unwrap()));
}

fn cyclotomic(c: &mut Criterion) {
    let field = characters_of_subfield(229, 4).unwrap();
    c.bench_function("h_minus quartic 229", |b| b.iter(|| h_minus(black_box(&field)).unwrap()));
    let field = characters_of_subfield(499, 2).unwrap();
    c.bench_function("h_minus quadratic 499", |b| b.iter(|| h_minus(black_box(&field)).unwrap()));
}

fn conics(c: &mut Criterion) {
    c.bench_function("solve_conic 73 71", |b| b.iter(|| solve_conic(black_box(73), 71, DEFAULT_CONIC_BOUND).unwrap()));
}

fn modules(c: &mut Criterion) {
    c.bench_function("solve_e1_e2 13", |b| b.iter(|| solve_e1_e2(black_box(13)).unwrap()));
    let limits = EnumLimits::default();
    c.bench_function("enumerate p3 at 3^3", |b| {
        b.iter(|| run_enumeration(3, black_box(27), EnumCheck::P3, &limits).unwrap())
    });
}

criterion_group!(benches, forms, cyclotomic, conics, modules);
criterion_main!(benches);
