//! Timings for the kernels behind the acceptance runtime budgets: frame
//! construction, Dirac assembly and axiom checks, spectrum verification,
//! and the per-degree graded cohomology sweep.

use criterion::{criterion_group, criterion_main, Criterion};
use diraclab::exterior::CliffordFrame;
use diraclab::graded::{self, Polynomial};
use diraclab::mat::c;
use diraclab::spectral::{self, SpectralConfig};
use diraclab::{sample, DEFAULT_SEED};
use std::hint::black_box;

fn bench_frames(c: &mut Criterion) {
    let mut group = c.benchmark_group("exterior");
    group.sample_size(20);
    group.bench_function("build_frame_d8", |b| {
        b.iter(|| black_box(CliffordFrame::build(8).unwrap()))
    });
    let frame = CliffordFrame::build(8).unwrap();
    group.bench_function("car_residuals_d8", |b| b.iter(|| black_box(frame.car_residuals())));
    group.finish();
}

fn bench_dirac(c: &mut Criterion) {
    let mut rng = sample::rng(DEFAULT_SEED);
    let tuple = sample::random_commuting_tuple(3, 6, &mut rng);
    let pair = tuple.assemble_dirac();
    let mut group = c.benchmark_group("dirac_d3_n6");
    group.sample_size(20);
    group.bench_function("assemble", |b| b.iter(|| black_box(tuple.assemble_dirac())));
    group.bench_function("axiom_check", |b| b.iter(|| black_box(pair.axiom_check())));
    group.bench_function("reconstruct", |b| b.iter(|| black_box(pair.reconstruct_tuple().unwrap())));
    group.finish();
}

fn bench_spectral(c: &mut Criterion) {
    let mut rng = sample::rng(DEFAULT_SEED + 1);
    let (tuple, _) = sample::random_diagonalizable_tuple(2, 5, &mut rng);
    let config = SpectralConfig { grid_cross_check: false, ..SpectralConfig::default() };
    let mut group = c.benchmark_group("spectral");
    group.sample_size(20);
    group.bench_function("taylor_spectrum_d2_n5", |b| {
        b.iter(|| black_box(spectral::taylor_spectrum_with(&tuple, &config).unwrap()))
    });
    group.bench_function("betti_numbers_d3_n5", |b| {
        let mut rng = sample::rng(DEFAULT_SEED + 2);
        let t = sample::random_commuting_tuple(3, 5, &mut rng);
        b.iter(|| black_box(spectral::betti_numbers(&t)))
    });
    group.finish();
}

fn bench_graded(crit: &mut Criterion) {
    let mut group = crit.benchmark_group("graded");
    group.sample_size(10);
    let free = graded::free_module_spec(3, 2, 8).unwrap();
    group.bench_function("koszul_betti_free_d3_rank2_n8", |b| {
        b.iter(|| black_box(graded::graded_koszul_betti(&free).unwrap()))
    });
    let phis = vec![
        Polynomial::variable(2, 1).unwrap(),
        Polynomial::monomial(2, c(1.0, 0.0), vec![0, 2]).unwrap(),
    ];
    group.bench_function("dshift_quotient_d2_r2_n10", |b| {
        b.iter(|| black_box(graded::dshift_quotient_spec(2, 2, &phis, 10).unwrap()))
    });
    let quotient = graded::dshift_quotient_spec(2, 2, &phis, 10).unwrap();
    group.bench_function("stabilized_index_quotient", |b| {
        b.iter(|| black_box(graded::stabilized_index(&quotient).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_frames, bench_dirac, bench_spectral, bench_graded);
criterion_main!(benches);
