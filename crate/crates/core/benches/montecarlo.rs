//! Parallel vs sequential Monte Carlo driver comparison. Both produce
//! bit-identical estimates; the interesting number is the wall-clock ratio.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use noma_relay::db_to_linear;
use noma_relay::mc::{self, McControl, OutageKind, RateKind};
use noma_relay::model::{Duplex, SystemConfig};
use std::hint::black_box;

fn bench_outage_drivers(c: &mut Criterion) {
    let cfg = SystemConfig::reference(Duplex::Fd, true);
    let rho = db_to_linear(20.0);
    let mut group = c.benchmark_group("outage_d2_dir_ub");
    group.sample_size(10);
    for samples in [200_000u64, 1_000_000] {
        let ctl = McControl::with_samples(samples, 42);
        group.bench_with_input(BenchmarkId::new("parallel", samples), &ctl, |b, ctl| {
            b.iter(|| black_box(mc::estimate_outage(&cfg, rho, OutageKind::D2DirUb, ctl)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", samples), &ctl, |b, ctl| {
            b.iter(|| black_box(mc::estimate_outage_seq(&cfg, rho, OutageKind::D2DirUb, ctl)))
        });
    }
    group.finish();
}

fn bench_rate_drivers(c: &mut Criterion) {
    let cfg = SystemConfig::reference(Duplex::Fd, false);
    let rho = db_to_linear(20.0);
    let ctl = McControl::with_samples(500_000, 42);
    let mut group = c.benchmark_group("ergodic_sum_nodir");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(mc::estimate_ergodic(&cfg, rho, RateKind::SumNodir, &ctl)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(mc::estimate_ergodic_seq(&cfg, rho, RateKind::SumNodir, &ctl)))
    });
    group.finish();
}

criterion_group!(benches, bench_outage_drivers, bench_rate_drivers);
criterion_main!(benches);
