use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcone::caselaw::{curve_for_case, enumerate_quadruples, eps_expand, random_inputs};
use symcone::suites::random_op;
use symcone::{build_witness, fine_peirce, in_cop, random_element, spectral, Algebra, AlgebraRef, Budget, JordanFrame};

fn algebras() -> Vec<AlgebraRef> {
    vec![Algebra::hadamard(6), Algebra::sym(4), Algebra::spin(8)]
}

fn bench_spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral");
    for alg in algebras() {
        let x = random_element(&alg, 1);
        g.bench_with_input(BenchmarkId::from_parameter(&alg), &x, |b, x| b.iter(|| spectral(black_box(x)).unwrap()));
    }
    g.finish();
}

fn bench_peirce(c: &mut Criterion) {
    let mut g = c.benchmark_group("fine_peirce");
    for alg in algebras() {
        let frame = JordanFrame::of_element(&random_element(&alg, 2), 1e-9).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(&alg), &frame, |b, f| {
            b.iter(|| fine_peirce(black_box(f), 1e-9).unwrap())
        });
    }
    g.finish();
}

fn bench_cop(c: &mut Criterion) {
    let mut g = c.benchmark_group("in_cop");
    g.sample_size(10);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alg in [Algebra::hadamard(2), Algebra::spin(5), Algebra::sym(3)] {
        let a = random_op(&alg, &mut rng);
        let budget = Budget { starts: 16, iterations: 200 };
        g.bench_with_input(BenchmarkId::from_parameter(&alg), &a, |b, a| {
            b.iter(|| in_cop(black_box(a), budget, 0, 1e-9).unwrap())
        });
    }
    g.finish();
}

fn bench_expand(c: &mut Criterion) {
    let alg = Algebra::sym(4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sys = fine_peirce(&JordanFrame::of_element(&random_element(&alg, 5), 1e-9).unwrap(), 1e-9).unwrap();
    let a = random_op(&alg, &mut rng);
    let curves: Vec<_> = enumerate_quadruples(4)
        .unwrap()
        .into_iter()
        .map(|(q, t)| {
            let inputs = random_inputs(&sys, &q, &mut rng).unwrap();
            curve_for_case(t, &sys, &q, &inputs, 1e-8).unwrap()
        })
        .collect();
    c.bench_function("eps_expand/sym(4) all quadruples", |b| {
        b.iter(|| {
            for curve in &curves {
                black_box(eps_expand(&a, curve).unwrap());
            }
        })
    });
}

fn bench_witness(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_witness");
    g.sample_size(10);
    for alg in algebras() {
        let c0 = spectral(&random_element(&alg, 6)).unwrap().frame[0].clone();
        g.bench_with_input(BenchmarkId::from_parameter(&alg), &c0, |b, c0| {
            b.iter(|| build_witness(black_box(c0), 100, 7, 1e-9).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_spectral, bench_peirce, bench_cop, bench_expand, bench_witness);
criterion_main!(benches);
