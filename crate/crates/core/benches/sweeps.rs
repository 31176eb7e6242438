// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cstar_sym::par::Exec;
use cstar_sym::selftest::{self, Criterion as Sweep, SelftestConfig};

const SWEEPS: [(&str, Sweep); 4] = [
    ("tp_formulas", selftest::tp_formulas),
    ("herstein", selftest::herstein_suite),
    ("extraction", selftest::extraction_round_trip),
    ("reconstruction", selftest::reconstruction_round_trip),
];

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, sweep) in SWEEPS {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let cfg = SelftestConfig { exec, ..SelftestConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, format!("{exec:?}")), &cfg, |b, cfg| {
                b.iter(|| black_box(sweep(cfg)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
