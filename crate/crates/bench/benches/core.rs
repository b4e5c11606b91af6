use std::hint::black_box;

use ceinv_core::abelian::smith_normal_form;
use ceinv_core::geometry::{bifurcation_diagram, classify_diagram, qq_relation_check, random_quintuple};
use ceinv_core::relations::{raw_relation_instances, relation_matrix, universal_group};
use ceinv_core::DegreeWindow;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn normal_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for m in 1..=3 {
        let w = DegreeWindow::new(m).unwrap();
        let a = relation_matrix(&raw_relation_instances(&w), &w);
        group.bench_with_input(BenchmarkId::from_parameter(m), &a, |b, a| b.iter(|| smith_normal_form(black_box(a))));
    }
    group.finish();
}

fn universal(c: &mut Criterion) {
    let w = DegreeWindow::new(3).unwrap();
    c.bench_function("universal_group/3", |b| b.iter(|| universal_group(black_box(&w))));
}

fn quintuples(c: &mut Criterion) {
    let q = random_quintuple(7, 20).unwrap();
    c.bench_function("bifurcation_diagram", |b| b.iter(|| bifurcation_diagram(black_box(&q)).unwrap()));
    let d = bifurcation_diagram(&q).unwrap();
    c.bench_function("qq_relation_check", |b| b.iter(|| qq_relation_check(black_box(&d))));
    c.bench_function("classify_diagram", |b| b.iter(|| classify_diagram(black_box(&d))));
}

criterion_group!(benches, normal_forms, universal, quintuples);
criterion_main!(benches);
