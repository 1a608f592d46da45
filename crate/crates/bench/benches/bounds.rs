use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gaussian_eof::testkit::{self, EnsembleConfig};
use gaussian_eof::{
    bound_report, cm_from_standard_form, lb1, lb1_via_invariant_chain, lb1_via_pipeline, lb2, standard_form,
    validate_cm, StandardForm,
};

fn closed_forms(c: &mut Criterion) {
    let sf = StandardForm::new(1.5, 2.0, 1.2, -1.0);
    c.bench_function("lb1 closed form", |b| b.iter(|| lb1(black_box(&sf))));
    c.bench_function("lb2", |b| b.iter(|| lb2(black_box(&sf))));
    c.bench_function("bound_report", |b| b.iter(|| bound_report(black_box(&sf))));
}

fn matrix_routes(c: &mut Criterion) {
    let g = cm_from_standard_form(&StandardForm::new(2.0, 3.0, 1.7, -1.2));
    c.bench_function("validate_cm", |b| b.iter(|| validate_cm(black_box(&g))));
    c.bench_function("standard_form", |b| b.iter(|| standard_form(black_box(&g))));
    c.bench_function("lb1 via pipeline", |b| b.iter(|| lb1_via_pipeline(black_box(&g))));
    c.bench_function("lb1 via invariant chain", |b| {
        b.iter(|| lb1_via_invariant_chain(black_box(&g)))
    });
}

fn ensembles(c: &mut Criterion) {
    let cfg = EnsembleConfig::with_seed(1, 100);
    c.bench_function("pipeline_equivalence_check 100", |b| {
        b.iter(|| testkit::pipeline_equivalence_check(black_box(&cfg)))
    });
    c.bench_function("concavity_check 100", |b| {
        b.iter(|| testkit::concavity_check(black_box(&cfg)))
    });
}

criterion_group!(benches, closed_forms, matrix_routes, ensembles);
criterion_main!(benches);
