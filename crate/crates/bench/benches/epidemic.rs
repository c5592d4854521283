use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwalk_epi::analysis::estimate_r0;
use qwalk_epi::epidemic::{run_realization, EpidemicConfig, Policy};

fn realization(c: &mut Criterion) {
    let mut group = c.benchmark_group("realization_64x64_full_p1_tau3");
    for policy in Policy::ALL {
        let cfg = EpidemicConfig::new(64, 4096, 1.0, 3, policy).with_seed(1);
        group.bench_with_input(BenchmarkId::from_parameter(policy), &cfg, |b, cfg| {
            b.iter(|| black_box(run_realization(cfg).unwrap()))
        });
    }
    group.finish();
}

fn r0_cell(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_r0_200_runs_p1_tau2");
    group.sample_size(10);
    for policy in [
        Policy::Classical,
        Policy::QuantumHistogram,
        Policy::QuantumStatevector,
    ] {
        let cfg = EpidemicConfig::new(64, 4096, 1.0, 2, policy);
        group.bench_with_input(BenchmarkId::from_parameter(policy), &cfg, |b, cfg| {
            b.iter(|| black_box(estimate_r0(cfg, 200).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, realization, r0_cell);
criterion_main!(benches);
