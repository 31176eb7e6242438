// SPDX-License-Identifier: Apache-2.0

//! `cstar-sym`: checks, decompositions and reconstructions of symmetries of
//! finite-dimensional C*-algebras, driven by JSON files.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad
//! input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cstar_sym::algebra::BlockAlgebra;
use cstar_sym::bloch::orientation_of;
use cstar_sym::extraction::{block_kind, extract_unitary, verify_implementation};
use cstar_sym::random::{self, TransposeMode};
use cstar_sym::selftest::{run_all, SelftestConfig, Tolerances};
use cstar_sym::states::{tp_amplitude, tp_carrier, tp_norm, PureStateFile};
use cstar_sym::symmetry::{
    check_herstein_identities, is_jordan_symmetry, jordan_from_wigner, CanonicalSymmetry, JordanMap, JordanSymmetry,
    ReconstructOptions,
};
use cstar_sym::thomsen::{thomsen_decompose, verify_centrality};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cstar-sym", version, about = "Symmetries of finite-dimensional C*-algebras")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random samples in sampled checks.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition probability of two pure states by three formulas.
    Tp {
        a: PathBuf,
        b: PathBuf,
        /// Block dimensions, e.g. `3,2`, for state files without an algebra.
        #[arg(long, value_delimiter = ',')]
        algebra: Option<Vec<usize>>,
    },
    /// Validate a Jordan map and run the Herstein identities.
    CheckJordan { map: PathBuf },
    /// Thomsen decomposition of a Jordan symmetry.
    Decompose { map: PathBuf },
    /// Implementing (anti-)unitary of one block.
    Extract {
        map: PathBuf,
        #[arg(long)]
        block: usize,
    },
    /// Jordan symmetry of a Wigner oracle given in canonical form.
    Reconstruct { spec: PathBuf },
    /// Orientation of the induced Bloch-sphere maps.
    Orientation { map: PathBuf },
    /// Seeded random Jordan map, oracle spec or pure state.
    Random {
        kind: Kind,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Transpose::Random)]
        transpose: Transpose,
    },
    /// Run the built-in acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Jordan,
    Wigner,
    State,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Transpose {
    None,
    All,
    Random,
}

impl From<Transpose> for TransposeMode {
    fn from(t: Transpose) -> Self {
        match t {
            Transpose::None => TransposeMode::None,
            Transpose::All => TransposeMode::All,
            Transpose::Random => TransposeMode::Random,
        }
    }
}

/// Bad input; exits with 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

/// A finished command: JSON report, summary lines and verdict.
struct Outcome {
    report: Value,
    summary: Vec<String>,
    passed: bool,
}

impl Outcome {
    fn failed(what: &str, err: impl std::fmt::Display) -> Self {
        let msg = format!("{what}: {err}");
        Outcome { report: json!({ "passed": false, "error": msg }), summary: vec![format!("FAIL {msg}")], passed: false }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Splits `--tol.<name> <value>` and `--tol.<name>=<value>` off the argument
/// list, since clap cannot declare dynamic flag names.
fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, Tolerances), InputError> {
    let mut tol = Tolerances::default();
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(spec) = arg.strip_prefix("--tol.") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| InputError(format!("--tol.{spec} needs a value")))?;
                (spec.to_string(), v)
            }
        };
        let value: f64 = value.parse().map_err(|_| InputError(format!("--tol.{name}: '{value}' is not a number")))?;
        tol.set(&name, value).map_err(InputError)?;
    }
    Ok((rest, tol))
}

fn validated(map: JordanMap, cli: &Cli) -> Result<JordanSymmetry, Outcome> {
    JordanSymmetry::validate(map, cli.trials, cli.seed).map_err(|e| Outcome::failed("map is not a Jordan symmetry", e))
}

fn cmd_tp(a: &Path, b: &Path, dims: Option<&[usize]>, tol: &Tolerances) -> Result<Outcome, InputError> {
    let fallback = dims.map(|d| BlockAlgebra::new(d.to_vec())).transpose()?;
    let x = read_json::<PureStateFile>(a)?.into_state(fallback.as_ref())?;
    let y = read_json::<PureStateFile>(b)?.into_state(fallback.as_ref())?;
    let values = [tp_amplitude(&x, &y)?, tp_norm(&x, &y)?, tp_carrier(&x, &y)?];
    let dev = (values[0] - values[1]).abs().max((values[0] - values[2]).abs()).max((values[1] - values[2]).abs());
    let passed = dev < tol.tp_formula;
    Ok(Outcome {
        report: json!({
            "tp_amplitude": values[0],
            "tp_norm": values[1],
            "tp_carrier": values[2],
            "max_deviation": dev,
            "tolerance": tol.tp_formula,
            "passed": passed,
        }),
        summary: vec![
            format!("tp_amplitude {:.12}", values[0]),
            format!("tp_norm      {:.12}", values[1]),
            format!("tp_carrier   {:.12}", values[2]),
            format!("{} max deviation {dev:.3e} (tolerance {:.1e})", verdict(passed), tol.tp_formula),
        ],
        passed,
    })
}

fn cmd_check_jordan(map: &Path, cli: &Cli, tol: &Tolerances) -> Result<Outcome, InputError> {
    let j: JordanMap = read_json(map)?;
    let jordan = is_jordan_symmetry(&j, cli.trials, cli.seed);
    let herstein = check_herstein_identities(&j, cli.trials.min(50), cli.seed);
    let jordan_ok = jordan.invertible && jordan.basis_residual < tol.herstein && jordan.random_residual < tol.herstein;
    let herstein_ok = herstein.checks.iter().all(|c| c.max_residual < tol.herstein);
    let passed = jordan_ok && herstein_ok;
    let mut summary = vec![format!(
        "{} Jordan product: basis residual {:.3e} witness {:?}, random residual {:.3e}, conditioning {:.3e}",
        verdict(jordan_ok),
        jordan.basis_residual,
        jordan.basis_witness,
        jordan.random_residual,
        jordan.conditioning
    )];
    for c in &herstein.checks {
        summary.push(format!(
            "{} identity {:<6} residual {:.3e} witness {:?}",
            verdict(c.max_residual < tol.herstein),
            c.name,
            c.max_residual,
            c.witness
        ));
    }
    Ok(Outcome {
        report: json!({ "jordan": jordan, "herstein": herstein, "tolerance": tol.herstein, "passed": passed }),
        summary,
        passed,
    })
}

fn cmd_decompose(map: &Path, cli: &Cli) -> Result<Outcome, InputError> {
    let j = match validated(read_json(map)?, cli) {
        Ok(j) => j,
        Err(o) => return Ok(o),
    };
    let dec = match thomsen_decompose(&j) {
        Ok(d) => d,
        Err(e) => return Ok(Outcome::failed("decomposition", e)),
    };
    let centrality = verify_centrality(&dec, j.algebra())?;
    let report = dec.report();
    let passed = centrality.passed;
    let labels: Vec<&str> = report.labels.iter().map(|l| l.as_str()).collect();
    let summary = vec![
        format!("labels {}", labels.join(" ")),
        format!("p1 {:?}  p2 {:?}  p3 {:?}", report.p1_blocks, report.p2_blocks, report.p3_blocks),
        format!(
            "{} centrality: commutator {:.3e}, block deviation {:.3e}, completeness {:.3e}",
            verdict(passed),
            centrality.max_commutator,
            centrality.block_deviation,
            centrality.completeness
        ),
    ];
    let mut value = serde_json::to_value(&report)?;
    value["centrality"] = serde_json::to_value(&centrality)?;
    value["passed"] = json!(passed);
    Ok(Outcome { report: value, summary, passed })
}

fn cmd_extract(map: &Path, block: usize, cli: &Cli, tol: &Tolerances) -> Result<Outcome, InputError> {
    let raw: JordanMap = read_json(map)?;
    raw.algebra().check_block(block)?;
    let j = match validated(raw, cli) {
        Ok(j) => j,
        Err(o) => return Ok(o),
    };
    let op = match block_kind(j.map(), block).and_then(|kind| extract_unitary(&j, block, kind)) {
        Ok(op) => op,
        Err(e) => return Ok(Outcome::failed("extraction", e)),
    };
    let check = verify_implementation(j.map(), &op)?;
    let passed = check.max_residual < tol.extraction && check.unitarity_defect < tol.extraction;
    let summary = vec![
        format!("block {block} from source block {:?}, antiunitary {}", check.source_block, op.antiunitary),
        format!("u = {:?}", op.u),
        format!(
            "{} implementation residual {:.3e}, unitarity defect {:.3e}",
            verdict(passed),
            check.max_residual,
            check.unitarity_defect
        ),
    ];
    Ok(Outcome { report: json!({ "operator": op, "verification": check, "passed": passed }), summary, passed })
}

fn cmd_reconstruct(spec: &Path, cli: &Cli, tol: &Tolerances) -> Result<Outcome, InputError> {
    let c: CanonicalSymmetry = read_json(spec)?;
    let opts = ReconstructOptions { trials: cli.trials, seed: cli.seed };
    let rec = match jordan_from_wigner(&c.oracle(), c.algebra(), &opts) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::failed("reconstruction", e)),
    };
    let passed = rec.residual < tol.reconstruction;
    let summary = vec![
        format!("permutation {:?}", rec.canonical.perm()),
        format!(
            "antiunitary {:?}",
            rec.canonical.blocks().iter().map(|b| b.antiunitary).collect::<Vec<_>>()
        ),
        format!("{} round-trip residual {:.3e}", verdict(passed), rec.residual),
    ];
    Ok(Outcome {
        report: json!({ "jordan": rec.jordan.map(), "residual": rec.residual, "passed": passed }),
        summary,
        passed,
    })
}

fn cmd_orientation(map: &Path, cli: &Cli) -> Result<Outcome, InputError> {
    let j = match validated(read_json(map)?, cli) {
        Ok(j) => j,
        Err(o) => return Ok(o),
    };
    let report = match orientation_of(&j) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::failed("orientation", e)),
    };
    let mut summary = vec![format!("verdict {}", report.verdict.as_str())];
    for c in &report.corner_checks {
        summary.push(format!(
            "{} block {} corner det {:+.12} (alternate chart {:+.12})",
            verdict(c.consistent),
            c.block,
            c.det,
            c.det_alternate_chart
        ));
    }
    let passed = report.consistent;
    let mut value = serde_json::to_value(&report)?;
    value["passed"] = json!(passed);
    Ok(Outcome { report: value, summary, passed })
}

fn cmd_random(kind: Kind, dims: &[usize], transpose: Transpose, cli: &Cli) -> Result<Outcome, InputError> {
    let alg = BlockAlgebra::new(dims.to_vec())?;
    let mut rng = random::rng(cli.seed);
    let value = match kind {
        Kind::Jordan => serde_json::to_value(random::jordan_symmetry(&mut rng, &alg, transpose.into()).map())?,
        Kind::Wigner => serde_json::to_value(random::canonical_symmetry(&mut rng, &alg, transpose.into()))?,
        Kind::State => serde_json::to_value(PureStateFile::from(&random::pure_state(&mut rng, &alg)))?,
    };
    let text = serde_json::to_string_pretty(&value)?;
    Ok(Outcome { report: value, summary: vec![text], passed: true })
}

fn cmd_selftest(cli: &Cli, tol: &Tolerances) -> Result<Outcome, InputError> {
    let cfg = SelftestConfig { seed: cli.seed, trials: cli.trials, tolerances: tol.clone(), ..SelftestConfig::default() };
    let report = run_all(&cfg);
    let summary = report
        .results
        .iter()
        .map(|r| {
            format!(
                "{} {:>2} {:<34} measured {:.3e} tolerance {:.1e}  {}",
                verdict(r.passed),
                r.id,
                r.name,
                r.measured,
                r.tolerance,
                r.detail
            )
        })
        .collect();
    Ok(Outcome { report: serde_json::to_value(&report)?, summary, passed: report.passed })
}

fn run(cli: &Cli, tol: &Tolerances) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::Tp { a, b, algebra } => cmd_tp(a, b, algebra.as_deref(), tol),
        Command::CheckJordan { map } => cmd_check_jordan(map, cli, tol),
        Command::Decompose { map } => cmd_decompose(map, cli),
        Command::Extract { map, block } => cmd_extract(map, *block, cli, tol),
        Command::Reconstruct { spec } => cmd_reconstruct(spec, cli, tol),
        Command::Orientation { map } => cmd_orientation(map, cli),
        Command::Random { kind, dims, transpose } => cmd_random(*kind, dims, *transpose, cli),
        Command::Selftest => cmd_selftest(cli, tol),
    }
}

fn main() -> ExitCode {
    let (args, tol) = match split_tolerances(std::env::args().collect()) {
        Ok(x) => x,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let outcome = match run(&cli, &tol) {
        Ok(o) => o,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports are plain JSON") + "\n";
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.json {
        print!("{text}");
    } else if !(cli.output.is_some() && matches!(cli.command, Command::Random { .. })) {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    ExitCode::from(if outcome.passed { 0 } else { 1 })
}
