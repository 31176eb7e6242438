// SPDX-License-Identifier: Apache-2.0

//! Seeded property sweeps that exercise the whole crate at desk scale. Each
//! criterion measures a worst-case residual and compares it with a named,
//! overridable tolerance.

use std::time::Instant;

use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::bloch::{bloch_to_density, density_to_bloch, orientation_of, BlochVector, Orientation};
use crate::error::Error;
use crate::extraction::{extract_unitary, phase_distance, verify_implementation, ImplementingOperator};
use crate::matrix::{c64, inner, vec_norm, ComplexMatrix, C64};
use crate::par::{map_range, Exec};
use crate::random::{self, TransposeMode};
use crate::states::{tp_amplitude, tp_carrier, tp_inf_witness, tp_norm, PureState};
use crate::symmetry::{
    check_herstein_identities, jordan_from_wigner, kadison_apply, wigner_from_jordan, BlockOperator,
    CanonicalSymmetry, JordanMap, JordanSymmetry, KadisonView, ReconstructOptions, DEFAULT_TRIALS,
};
use crate::thomsen::{decompose_in_order, thomsen_decompose, verify_centrality, BlockLabel};

/// Named tolerances of the self-test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub tp_formula: f64,
    pub distance_identity: f64,
    pub herstein: f64,
    pub thomsen_projection: f64,
    pub thomsen_uniqueness: f64,
    pub extraction: f64,
    pub reconstruction: f64,
    pub bloch_identity: f64,
    pub bloch_round_trip: f64,
    pub orientation_det: f64,
    pub unitality: f64,
    pub positivity_floor: f64,
    pub inf_dominance: f64,
    pub inf_equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tp_formula: 1e-9,
            distance_identity: 1e-8,
            herstein: 1e-8,
            thomsen_projection: 1e-9,
            thomsen_uniqueness: 1e-8,
            extraction: 1e-8,
            reconstruction: 1e-8,
            bloch_identity: 1e-12,
            bloch_round_trip: 1e-10,
            orientation_det: 1e-9,
            unitality: 1e-9,
            positivity_floor: 1e-8,
            inf_dominance: 1e-8,
            inf_equality: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 14] = [
        "tp_formula",
        "distance_identity",
        "herstein",
        "thomsen_projection",
        "thomsen_uniqueness",
        "extraction",
        "reconstruction",
        "bloch_identity",
        "bloch_round_trip",
        "orientation_det",
        "unitality",
        "positivity_floor",
        "inf_dominance",
        "inf_equality",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "tp_formula" => &mut self.tp_formula,
            "distance_identity" => &mut self.distance_identity,
            "herstein" => &mut self.herstein,
            "thomsen_projection" => &mut self.thomsen_projection,
            "thomsen_uniqueness" => &mut self.thomsen_uniqueness,
            "extraction" => &mut self.extraction,
            "reconstruction" => &mut self.reconstruction,
            "bloch_identity" => &mut self.bloch_identity,
            "bloch_round_trip" => &mut self.bloch_round_trip,
            "orientation_det" => &mut self.orientation_det,
            "unitality" => &mut self.unitality,
            "positivity_floor" => &mut self.positivity_floor,
            "inf_dominance" => &mut self.inf_dominance,
            "inf_equality" => &mut self.inf_equality,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().slot(name).map(|v| *v)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("tolerance {name} must be a positive number, got {value}"));
        }
        match self.slot(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(format!("unknown tolerance '{name}' (known: {})", Self::NAMES.join(", "))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Sample budget for the checks run inside reconstruction.
    pub trials: usize,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { seed: 0, trials: DEFAULT_TRIALS, tolerances: Tolerances::default(), exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Worst residual observed.
    pub measured: f64,
    /// Tolerance the residual was held to.
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str, measured: f64, tolerance: f64, extra_ok: bool, detail: String) -> Self {
        Self { id, name, passed: extra_ok && measured < tolerance, measured, tolerance, detail, seconds: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
    pub passed: bool,
}

fn alg(dims: &[usize]) -> BlockAlgebra {
    BlockAlgebra::new(dims.to_vec()).expect("valid dimensions")
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Second state of a pair: from the same block on even trials.
fn partner(rng: &mut random::SeededRng, a: &BlockAlgebra, first: &PureState, t: usize) -> PureState {
    if t.is_multiple_of(2) {
        random::pure_state_in_block(rng, a, first.block())
    } else {
        random::pure_state(rng, a)
    }
}

/// Transition-probability formulas agree on random pairs.
pub fn tp_formulas(cfg: &SelftestConfig) -> CriterionResult {
    let shapes: [&[usize]; 4] = [&[3], &[2, 2], &[5, 3, 1], &[8]];
    let per = 250;
    let devs = map_range(cfg.exec, shapes.len() * per, |t| {
        let a = alg(shapes[t / per]);
        let mut rng = random::trial_rng(cfg.seed, 1, t as u64);
        let x = random::pure_state(&mut rng, &a);
        let y = partner(&mut rng, &a, &x, t);
        let v = [tp_amplitude(&x, &y), tp_norm(&x, &y), tp_carrier(&x, &y)].map(|r| r.expect("same algebra"));
        max([(v[0] - v[1]).abs(), (v[0] - v[2]).abs(), (v[1] - v[2]).abs()])
    });
    let n = devs.len();
    CriterionResult::new(1, "tp formula equivalence", max(devs), cfg.tolerances.tp_formula, true, format!("{n} pairs"))
}

/// Trace norm of `|a><a| - |b><b|` by a 2x2 spectral computation on
/// `span{a, b}`: the compressed difference is traceless hermitian, with
/// eigenvalues `+-sqrt(-det)`.
fn trace_norm_on_span(a: &[C64], b: &[C64]) -> f64 {
    let overlap = inner(a, b);
    let rest: Vec<C64> = b.iter().zip(a).map(|(y, x)| y - overlap * x).collect();
    let r = vec_norm(&rest);
    if r < 1e-15 {
        return 0.0;
    }
    // b = overlap e1 + r e2 in the basis (a, rest / r)
    let (p, q) = (overlap, c64(r, 0.0));
    let m00 = 1.0 - p.norm_sqr();
    let m01 = -(p * q.conj());
    let m11 = -q.norm_sqr();
    let det = m00 * m11 - m01.norm_sqr();
    2.0 * (-det).max(0.0).sqrt()
}

/// Same-block distance identity `||rho - rho'||_1 = 2 sqrt(1 - tau)`.
pub fn distance_identity(cfg: &SelftestConfig) -> CriterionResult {
    let shapes: [&[usize]; 4] = [&[3], &[2, 2], &[5, 3, 1], &[8]];
    let per = 100;
    let devs = map_range(cfg.exec, shapes.len() * per, |t| {
        let a = alg(shapes[t / per]);
        let mut rng = random::trial_rng(cfg.seed, 2, t as u64);
        let x = random::pure_state(&mut rng, &a);
        let y = random::pure_state_in_block(&mut rng, &a, x.block());
        let tau = tp_amplitude(&x, &y).expect("same algebra");
        // 1 - tau as a squared residual, free of cancellation near tau = 1
        let overlap = inner(x.psi(), y.psi());
        let rest: Vec<C64> = y.psi().iter().zip(x.psi()).map(|(b, a)| b - overlap * a).collect();
        let gap = vec_norm(&rest).powi(2);
        let norm = (&x.projector() - &y.projector()).trace_norm();
        let oracle = trace_norm_on_span(x.psi(), y.psi());
        let formula = 2.0 * gap.sqrt();
        max([(norm - formula).abs(), (norm - oracle).abs(), ((1.0 - tau) - gap).abs()])
    });
    let n = devs.len();
    CriterionResult::new(2, "pure-state distance identity", max(devs), cfg.tolerances.distance_identity, true, format!("{n} same-block pairs"))
}

/// `J` with one off-diagonal entry of its matrix disturbed.
pub fn corrupted_map(a: &BlockAlgebra) -> JordanMap {
    let mut m = JordanMap::identity(a).matrix().clone();
    let d = m.nrows();
    m[(0, d - 1)] += 0.3;
    JordanMap::new(a.clone(), m).expect("finite")
}

/// Herstein identities on random Jordan symmetries plus a corrupted control.
pub fn herstein_suite(cfg: &SelftestConfig) -> CriterionResult {
    let shapes: [&[usize]; 3] = [&[3], &[2, 2], &[4, 3, 1]];
    let per = 50;
    let triples = 10;
    let reports = map_range(cfg.exec, shapes.len() * per, |t| {
        let a = alg(shapes[t / per]);
        let mut rng = random::trial_rng(cfg.seed, 3, t as u64);
        let j = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        check_herstein_identities(&j, triples, cfg.seed ^ t as u64)
    });
    let worst = max(reports.iter().flat_map(|r| r.checks.iter().map(|c| c.max_residual)));
    let control = check_herstein_identities(&corrupted_map(&alg(&[2, 2])), triples, cfg.seed);
    let iii = control.check("iii").expect("identity exists");
    let control_ok = !iii.passed && iii.witness.is_some();
    CriterionResult::new(
        3,
        "Herstein identities",
        worst,
        cfg.tolerances.herstein,
        control_ok,
        format!(
            "{} symmetries x {triples} quadruples; corrupted control: (iii) residual {:.3e}, witness {:?}",
            reports.len(),
            iii.max_residual,
            iii.witness
        ),
    )
}

/// Jordan symmetry acting as the identity on some blocks and as the
/// transpose on the others.
pub fn partial_transpose(a: &BlockAlgebra, transposed: &[bool]) -> JordanSymmetry {
    let ops = a
        .dims()
        .iter()
        .zip(transposed)
        .map(|(&n, &t)| BlockOperator { u: ComplexMatrix::identity(n), antiunitary: t })
        .collect();
    let c = CanonicalSymmetry::new(a.clone(), (0..a.num_blocks()).collect(), ops).expect("valid form");
    JordanSymmetry::from_canonical(&c).expect("unitary operators")
}

/// Thomsen decomposition of `id + transpose + id` on `M_2 + M_3 + C`.
pub fn thomsen_recovery(cfg: &SelftestConfig) -> CriterionResult {
    let a = alg(&[2, 3, 1]);
    let j = partial_transpose(&a, &[false, true, false]);
    let tol = &cfg.tolerances;
    let dec = match thomsen_decompose(&j) {
        Ok(dec) => dec,
        Err(e) => return CriterionResult::new(4, "Thomsen recovery", f64::INFINITY, tol.thomsen_projection, false, e.to_string()),
    };
    let expected = [[true, false, false], [false, true, false], [false, false, true]];
    let dev = max(dec
        .projections()
        .iter()
        .zip(expected)
        .map(|(p, mask)| p.sub(&AlgebraElement::central_projection(&a, &mask)).expect("same algebra").max_abs()));
    let labels_ok = dec.block_labels == [BlockLabel::Hom, BlockLabel::Anti, BlockLabel::Both];
    let central = verify_centrality(&dec, &a).map(|r| r.passed).unwrap_or(false);

    let mut order: Vec<usize> = (0..a.sa_dim()).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut random::trial_rng(cfg.seed, 4, 0));
    let uniqueness = match decompose_in_order(&j, &order) {
        Ok(other) => max(dec.projections().iter().zip(other.projections()).map(|(p, q)| p.sub(q).expect("same algebra").max_abs())),
        Err(_) => f64::INFINITY,
    };
    let mut r = CriterionResult::new(
        4,
        "Thomsen recovery",
        dev,
        tol.thomsen_projection,
        labels_ok && central && uniqueness < tol.thomsen_uniqueness,
        format!("labels {:?}, permuted-basis deviation {uniqueness:.3e}", dec.block_labels.iter().map(|l| l.as_str()).collect::<Vec<_>>()),
    );
    r.measured = r.measured.max(uniqueness * tol.thomsen_projection / tol.thomsen_uniqueness);
    r
}

/// Extraction round trip on random (anti-)unitary conjugations.
pub fn extraction_round_trip(cfg: &SelftestConfig) -> CriterionResult {
    let sizes = [2usize, 3, 5, 8];
    let per = 100;
    let results = map_range(cfg.exec, sizes.len() * per * 2, |t| {
        let n = sizes[t / (2 * per)];
        let anti = t % 2 == 1;
        let a = alg(&[n]);
        let mut rng = random::trial_rng(cfg.seed, 5, t as u64);
        let u = random::haar_unitary(&mut rng, n);
        let c = CanonicalSymmetry::new(a, vec![0], vec![BlockOperator { u: u.clone(), antiunitary: anti }]).expect("valid form");
        let j = JordanSymmetry::from_canonical(&c).expect("unitary");
        let kind = if anti { BlockLabel::Anti } else { BlockLabel::Hom };
        let op = extract_unitary(&j, 0, kind).ok()?;
        let reference = ImplementingOperator { block: 0, u, antiunitary: anti };
        let phase = phase_distance(&op, &reference).ok()?;
        let residual = verify_implementation(&j, &op).ok()?.max_residual;
        Some(phase.max(residual))
    });
    let failures = results.iter().filter(|r| r.is_none()).count();
    let worst = max(results.iter().map(|r| r.unwrap_or(f64::INFINITY)));
    CriterionResult::new(
        5,
        "extraction round trip",
        worst,
        cfg.tolerances.extraction,
        failures == 0,
        format!("{} extractions over n in {sizes:?}, {failures} errors", results.len()),
    )
}

/// Reconstruction of random Jordan symmetries from their Wigner oracles.
pub fn reconstruction_round_trip(cfg: &SelftestConfig) -> CriterionResult {
    let shapes: [&[usize]; 2] = [&[2, 2], &[4, 3, 1]];
    let per = 50;
    let trials = cfg.trials;
    let results = map_range(cfg.exec, shapes.len() * per, |t| {
        let a = alg(shapes[t / per]);
        let mut rng = random::trial_rng(cfg.seed, 6, t as u64);
        let j = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let opts = ReconstructOptions { trials, seed: cfg.seed.wrapping_add(t as u64) };
        let rec = jordan_from_wigner(&wigner_from_jordan(&j), &a, &opts).ok()?;
        rec.jordan.distance(&j).ok()
    });
    let failures = results.iter().filter(|r| r.is_none()).count();
    let worst = max(results.iter().map(|r| r.unwrap_or(f64::INFINITY)));

    let a = alg(&[2, 2]);
    let skew = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]);
    let bad = CanonicalSymmetry::new(
        a.clone(),
        vec![0, 1],
        vec![BlockOperator { u: skew, antiunitary: false }, BlockOperator { u: ComplexMatrix::identity(2), antiunitary: false }],
    )
    .expect("valid form");
    let control = jordan_from_wigner(&bad.oracle(), &a, &ReconstructOptions { trials, seed: cfg.seed });
    let control_ok = matches!(control, Err(Error::OracleInconsistent(_)));
    CriterionResult::new(
        6,
        "Wigner reconstruction round trip",
        worst,
        cfg.tolerances.reconstruction,
        failures == 0 && control_ok,
        format!("{} symmetries, {failures} errors; non-unitary control rejected: {control_ok}", results.len()),
    )
}

fn random_ball_point(rng: &mut random::SeededRng) -> BlochVector {
    use rand::Rng;
    let dir = random::unit_vector(rng, 3);
    let r: f64 = rng.random_range(0.0..=1.0f64).cbrt();
    let v = [dir[0].re, dir[1].re, dir[2].re];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-300);
    BlochVector::new(r * v[0] / n, r * v[1] / n, r * v[2] / n).unwrap_or(BlochVector { x: 0.0, y: 0.0, z: 0.0 })
}

fn random_sphere_point(rng: &mut random::SeededRng) -> BlochVector {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return BlochVector { x: v[0] / n, y: v[1] / n, z: v[2] / n };
        }
    }
}

/// Bloch identities: transition probability, determinant and round trip.
pub fn bloch_identities(cfg: &SelftestConfig) -> CriterionResult {
    let rows = map_range(cfg.exec, 1000, |t| {
        let mut rng = random::trial_rng(cfg.seed, 7, t as u64);
        let (x, y) = (random_sphere_point(&mut rng), random_sphere_point(&mut rng));
        let (rx, ry) = (bloch_to_density(x).expect("unit"), bloch_to_density(y).expect("unit"));
        let tp = (&rx * &ry).trace().re;
        let tp_dev = (tp - 0.5 * (1.0 + x.dot(y))).abs();
        let v = random_ball_point(&mut rng);
        let rv = bloch_to_density(v).expect("inside");
        let det = (rv.get(0, 0) * rv.get(1, 1) - rv.get(0, 1) * rv.get(1, 0)).re;
        let det_dev = (det - 0.25 * (1.0 - v.dot(v))).abs();
        let back = density_to_bloch(&rv).map(|w| max([(w.x - v.x).abs(), (w.y - v.y).abs(), (w.z - v.z).abs()]));
        (tp_dev.max(det_dev), back.unwrap_or(f64::INFINITY))
    });
    let identity = max(rows.iter().map(|r| r.0));
    let round = max(rows.iter().map(|r| r.1));
    let tol = &cfg.tolerances;
    let mut r = CriterionResult::new(
        7,
        "Bloch identities",
        identity,
        tol.bloch_identity,
        round < tol.bloch_round_trip,
        format!("1000 sphere pairs and ball points; round-trip deviation {round:.3e}"),
    );
    r.measured = identity.max(round * tol.bloch_identity / tol.bloch_round_trip);
    r
}

/// Orientation verdicts and corner determinants.
pub fn orientation_classification(cfg: &SelftestConfig) -> CriterionResult {
    let cases: Vec<(Vec<usize>, TransposeMode, Orientation)> = [&[3usize][..], &[2, 2], &[4, 3, 1]]
        .iter()
        .flat_map(|d| {
            [(d.to_vec(), TransposeMode::None, Orientation::Preserving), (d.to_vec(), TransposeMode::All, Orientation::Reversing)]
        })
        .collect();
    let per = 3;
    let results = map_range(cfg.exec, cases.len() * per, |t| {
        let (dims, mode, expected) = &cases[t / per];
        let a = alg(dims);
        let mut rng = random::trial_rng(cfg.seed, 8, t as u64);
        let j = random::jordan_symmetry(&mut rng, &a, *mode);
        let report = orientation_of(&j).ok()?;
        let sign = if *expected == Orientation::Preserving { 1.0 } else { -1.0 };
        let dev = max(report.corner_checks.iter().map(|c| (c.det - sign).abs()));
        let charts = report.corner_checks.iter().all(|c| c.det.signum() == c.det_alternate_chart.signum());
        (report.verdict == *expected && charts).then_some(dev)
    });
    let failures = results.iter().filter(|r| r.is_none()).count();
    let mut worst = max(results.iter().map(|r| r.unwrap_or(f64::INFINITY)));

    let a = alg(&[2, 2]);
    let mixed = orientation_of(&partial_transpose(&a, &[false, true]));
    let mixed_ok = matches!(&mixed, Ok(r) if r.verdict == Orientation::Mixed && r.consistent);
    if let Ok(r) = &mixed {
        worst = worst.max(max(r.corner_checks.iter().map(|c| (c.det.abs() - 1.0).abs())));
    }
    let c = alg(&[1, 1, 1]);
    let mut rng = random::trial_rng(cfg.seed, 8, u64::MAX);
    let trivial = orientation_of(&random::jordan_symmetry(&mut rng, &c, TransposeMode::Random));
    let trivial_ok = matches!(trivial, Ok(r) if r.verdict == Orientation::Trivial);
    CriterionResult::new(
        8,
        "orientation classification",
        worst,
        cfg.tolerances.orientation_det,
        failures == 0 && mixed_ok && trivial_ok,
        format!("{} random symmetries, {failures} misclassified; MIXED ok: {mixed_ok}; TRIVIAL ok: {trivial_ok}", results.len()),
    )
}

/// Unitality, positivity and state preservation of random Jordan symmetries.
pub fn positivity_unitality(cfg: &SelftestConfig) -> CriterionResult {
    let shapes: [&[usize]; 3] = [&[3], &[2, 2], &[4, 3, 1]];
    let per = 20;
    let rows = map_range(cfg.exec, shapes.len() * per, |t| {
        let a = alg(shapes[t / per]);
        let mut rng = random::trial_rng(cfg.seed, 9, t as u64);
        let j = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let one = AlgebraElement::unit(&a);
        let unit_dev = j.apply(&one).expect("same algebra").sub(&one).expect("same algebra").max_abs();
        let floor = (0..10)
            .map(|_| {
                let e = random::effect(&mut rng, &a);
                let image = j.apply(&e).expect("same algebra").map_blocks(ComplexMatrix::hermitian_part);
                image.min_eigenvalue().unwrap_or(f64::NEG_INFINITY)
            })
            .fold(f64::INFINITY, f64::min);
        let view = KadisonView::new(&j);
        let states_ok = (0..5).all(|_| kadison_apply(&view, &random::state(&mut rng, &a)).is_ok());
        (unit_dev, floor, states_ok)
    });
    let unit = max(rows.iter().map(|r| r.0));
    let floor = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let states_ok = rows.iter().all(|r| r.2);
    let tol = &cfg.tolerances;
    let mut r = CriterionResult::new(
        9,
        "positivity and unitality",
        unit,
        tol.unitality,
        floor >= -tol.positivity_floor && states_ok,
        format!("{} symmetries; eigenvalue floor {floor:.3e}; Kadison images valid: {states_ok}", rows.len()),
    );
    r.measured = unit.max((-floor).max(0.0) * tol.unitality / tol.positivity_floor);
    r
}

/// Infimum dominance of feasible witnesses over the transition probability.
pub fn infimum_dominance(cfg: &SelftestConfig) -> CriterionResult {
    let a = alg(&[3, 2]);
    let rows = map_range(cfg.exec, 100, |t| {
        let mut rng = random::trial_rng(cfg.seed, 10, t as u64);
        let x = random::pure_state(&mut rng, &a);
        let y = partner(&mut rng, &a, &x, t);
        let tau = tp_amplitude(&x, &y).expect("same algebra");
        let c = y.carrier();
        let rest = AlgebraElement::unit(&a).sub(&c).expect("same algebra");
        let equality = tp_inf_witness(&x, &y, &c).map(|v| (v - tau).abs()).unwrap_or(f64::INFINITY);
        let mut slack = f64::INFINITY;
        for _ in 0..100 {
            let b = random::effect(&mut rng, &a);
            let w = c
                .add(&rest.multiply(&b).and_then(|m| m.multiply(&rest)).expect("same algebra"))
                .expect("same algebra");
            let v = tp_inf_witness(&x, &y, &w).unwrap_or(f64::NEG_INFINITY);
            slack = slack.min(v - tau);
        }
        (equality, slack)
    });
    let equality = max(rows.iter().map(|r| r.0));
    let slack = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let tol = &cfg.tolerances;
    let mut r = CriterionResult::new(
        10,
        "infimum dominance",
        equality,
        tol.inf_equality,
        slack >= -tol.inf_dominance,
        format!("100 pairs x 100 witnesses; min value - tau {slack:.3e}"),
    );
    r.measured = equality.max((-slack).max(0.0) * tol.inf_equality / tol.inf_dominance);
    r
}

pub type Criterion = fn(&SelftestConfig) -> CriterionResult;

pub const CRITERIA: [Criterion; 10] = [
    tp_formulas,
    distance_identity,
    herstein_suite,
    thomsen_recovery,
    extraction_round_trip,
    reconstruction_round_trip,
    bloch_identities,
    orientation_classification,
    positivity_unitality,
    infimum_dominance,
];

pub fn run_all(cfg: &SelftestConfig) -> SelftestReport {
    let results: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|c| {
            let start = Instant::now();
            let mut r = c(cfg);
            r.seconds = start.elapsed().as_secs_f64();
            r
        })
        .collect();
    let passed = results.iter().all(|r| r.passed);
    SelftestReport { seed: cfg.seed, results, passed }
}
