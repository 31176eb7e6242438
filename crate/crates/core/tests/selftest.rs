// SPDX-License-Identifier: Apache-2.0

use cstar_sym::par::Exec;
use cstar_sym::selftest::{run_all, SelftestConfig};

#[test]
fn default_selftest_passes() {
    let report = run_all(&SelftestConfig::default());
    for r in &report.results {
        eprintln!("{:>2} {:<34} {:<5} measured {:.3e} tol {:.1e} {:.2}s  {}", r.id, r.name, r.passed, r.measured, r.tolerance, r.seconds, r.detail);
    }
    assert!(report.passed);
}

#[test]
fn sequential_and_parallel_agree() {
    let seq = SelftestConfig { exec: Exec::Sequential, seed: 7, ..SelftestConfig::default() };
    let par = SelftestConfig { exec: Exec::Parallel, ..seq.clone() };
    for (c, name) in [(cstar_sym::selftest::tp_formulas as cstar_sym::selftest::Criterion, "tp"), (cstar_sym::selftest::bloch_identities, "bloch")] {
        assert_eq!(c(&seq), { let mut r = c(&par); r.seconds = 0.0; r }, "{name}");
    }
}
