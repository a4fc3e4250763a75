use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use linterm_bench::FIXTURES;
use linterm_core::geometry::{integer_point, ConvexRegion, GeometryBudget};
use linterm_core::lattice::to_big;
use linterm_core::model::homogenize;
use linterm_core::spectral::spectrum_of;
use linterm_core::torus::{normalize, relation_basis, SearchBudget};
use linterm_core::{decide, parse_loop, simulate, LoopProgram, Rational};

fn programs() -> Vec<(&'static str, LoopProgram)> {
    FIXTURES.iter().map(|(n, s)| (*n, parse_loop(s).unwrap())).collect()
}

fn decision(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide");
    g.sample_size(10);
    for (name, p) in programs() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| b.iter(|| decide(black_box(p))));
    }
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    for (name, p) in programs() {
        let h = homogenize(&p);
        g.bench_with_input(BenchmarkId::from_parameter(name), &h, |b, h| b.iter(|| spectrum_of(black_box(h))));
    }
    g.finish();
}

fn relations(c: &mut Criterion) {
    let p = parse_loop(FIXTURES.iter().find(|f| f.0 == "rotation").unwrap().1).unwrap();
    let norm = normalize(&spectrum_of(&homogenize(&p)));
    c.bench_function("relation_basis/rotation", |b| {
        b.iter(|| relation_basis(black_box(&norm), &SearchBudget::default()))
    });
}

fn feasibility(c: &mut Criterion) {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let mut slab = ConvexRegion::new(3);
    slab.inequalities.push((vec![q(-1, 1), q(2, 1), q(3, 1)], q(-1, 10)));
    slab.inequalities.push((vec![q(1, 1), q(-2, 1), q(-3, 1)], q(2, 5)));
    for i in 0..3 {
        let mut e = vec![q(0, 1); 3];
        e[i] = q(1, 1);
        slab.inequalities.push((e.clone(), q(40, 1)));
        e[i] = q(-1, 1);
        slab.inequalities.push((e, q(40, 1)));
    }
    c.bench_function("integer_point/thin_slab", |b| {
        b.iter(|| integer_point(black_box(&slab), &GeometryBudget::default()))
    });
}

fn simulation(c: &mut Criterion) {
    let p = parse_loop(FIXTURES.iter().find(|f| f.0 == "count_up").unwrap().1).unwrap();
    let x = to_big(&[1]);
    c.bench_function("simulate/count_up_1e4", |b| b.iter(|| simulate(black_box(&p), &x, 10_000)));
}

criterion_group!(benches, decision, spectra, relations, feasibility, simulation);
criterion_main!(benches);
