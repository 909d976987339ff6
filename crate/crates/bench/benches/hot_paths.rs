//! Benchmarks for the four hot paths: Galerkin assembly, the dense
//! eigensolve, matching-function evaluation, and winding integration.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64;
use viscolim_core::{
    assemble_cap_matrix, matching_function, solve_spectrum, winding_number, CapConfig,
    KRectangle, PiecewiseConstantPotential, Potential,
};

fn barrier() -> PiecewiseConstantPotential {
    PiecewiseConstantPotential::from_triples(&[(-1.0, 1.0, 10.0)]).unwrap()
}

fn bench_assembly(c: &mut Criterion) {
    let potential = Potential::Piecewise(barrier());
    let cfg = CapConfig::new(0.1, 0.0, 128);
    c.bench_function("assemble_cap_matrix_n128", |b| {
        b.iter(|| assemble_cap_matrix(&potential, &cfg).unwrap())
    });
}

fn bench_eigensolve(c: &mut Criterion) {
    let potential = Potential::Piecewise(barrier());
    let cfg = CapConfig::new(0.1, 0.0, 128);
    let matrix = assemble_cap_matrix(&potential, &cfg).unwrap();
    c.bench_function("solve_spectrum_n128", |b| {
        b.iter_batched(
            || matrix.clone(),
            |m| solve_spectrum(&m).unwrap(),
            BatchSize::LargeInput,
        )
    });
}

fn bench_matching_function(c: &mut Criterion) {
    let p = barrier();
    let k = Complex64::new(3.4, -0.2);
    c.bench_function("matching_function", |b| {
        b.iter(|| matching_function(&p, k).unwrap())
    });
}

fn bench_winding(c: &mut Criterion) {
    let p = barrier();
    let rect = KRectangle::new(0.3, 6.0, -2.0, -1e-3);
    c.bench_function("winding_number_barrier_window", |b| {
        b.iter(|| winding_number(&p, &rect, 16).unwrap())
    });
}

criterion_group!(
    benches,
    bench_assembly,
    bench_eigensolve,
    bench_matching_function,
    bench_winding
);
criterion_main!(benches);
