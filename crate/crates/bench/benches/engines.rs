use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use orient_bench::{assoc, left_comb, pigeonhole, theory, ARITH, CRABBE, TIMESZERO};
use orient_core::clausify::clausal_form;
use orient_core::prover::{saturate, ProverMode, SaturationLimits};
use orient_core::rewrite::{critical_pairs, normalize, RewriteSystem, DEFAULT_FUEL, JOIN_FUEL};
use orient_core::sequent::check_proof;
use orient_core::unify::e_unify_all;

criterion_group!(benches, rewriting, unification, saturation, checking);
criterion_main!(benches);

fn rewriting(c: &mut Criterion) {
    let rs = assoc();
    let mut group = c.benchmark_group("normalize/left_comb");
    group.sample_size(20);
    for n in [16, 32, 64] {
        let t = left_comb(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| normalize(&rs, black_box(t), DEFAULT_FUEL))
        });
    }
    group.finish();

    let arith = theory(ARITH);
    let peano = arith.rewrite_system();
    let product = arith.parse_term("times(12,12)").unwrap();
    c.bench_function("normalize/times_12_12", |b| b.iter(|| normalize(&peano, black_box(&product), DEFAULT_FUEL)));
    c.bench_function("critical_pairs/peano", |b| b.iter(|| critical_pairs(black_box(&peano), JOIN_FUEL)));
}

fn unification(c: &mut Criterion) {
    let arith = theory(ARITH);
    let peano = arith.rewrite_system();
    let t = arith.parse_term("plus(X,Y)").unwrap();
    let u = arith.parse_term("3").unwrap();
    c.bench_function("e_unify/plus_xy_3", |b| b.iter(|| e_unify_all(&peano, black_box(&t), black_box(&u), 5)));
}

fn saturation(c: &mut Criterion) {
    let limits = SaturationLimits::default();
    let mut group = c.benchmark_group("saturate/pigeonhole");
    group.sample_size(10);
    for n in [2, 3] {
        let clauses = pigeonhole(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &clauses, |b, cs| {
            b.iter(|| saturate(black_box(cs), &RewriteSystem::default(), ProverMode::Resolution, &limits))
        });
    }
    group.finish();

    let th = theory(TIMESZERO);
    let rs = th.rewrite_system();
    let problem = clausal_form(&th.axioms, &[th.goal("square").unwrap().clone()]);
    c.bench_function("saturate/timeszero_modulo", |b| {
        b.iter(|| saturate(black_box(&problem.clauses), &rs, ProverMode::ResolutionModulo, &limits))
    });
}

fn checking(c: &mut Criterion) {
    let th = theory(CRABBE);
    let rs = th.rewrite_system();
    let proof = th.proof("notB").unwrap();
    c.bench_function("check_proof/crabbe_cut", |b| b.iter(|| check_proof(black_box(proof), &rs, DEFAULT_FUEL)));
}
