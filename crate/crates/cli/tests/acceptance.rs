// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines always show; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cstar_sym::selftest::{CriterionResult, SelftestConfig, CRITERIA};

const SELFTEST_BUDGET: Duration = Duration::from_secs(60);

fn line(id: u8, name: &str, passed: bool, detail: &str) -> bool {
    println!("criterion {id:>2} {} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    passed
}

fn library_criterion(c: fn(&SelftestConfig) -> CriterionResult, cfg: &SelftestConfig) -> bool {
    let r = c(cfg);
    line(r.id, r.name, r.passed, &format!("measured {:.3e} < {:.1e}; {}", r.measured, r.tolerance, r.detail))
}

fn end_to_end() -> bool {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_cstar-sym")).arg("selftest").output();
    let elapsed = start.elapsed();
    let code = status.as_ref().ok().and_then(|o| o.status.code());
    let passed = code == Some(0) && elapsed < SELFTEST_BUDGET;
    line(11, "end-to-end selftest", passed, &format!("exit {code:?} in {:.2} s (budget {} s)", elapsed.as_secs_f64(), SELFTEST_BUDGET.as_secs()))
}

fn main() -> ExitCode {
    let cfg = SelftestConfig::default();
    let mut all = true;
    for c in CRITERIA {
        all &= library_criterion(c, &cfg);
    }
    all &= end_to_end();
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
