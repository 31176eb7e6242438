// SPDX-License-Identifier: Apache-2.0

//! Wigner symmetries as black-box maps on pure states, the passage from a
//! Jordan symmetry to its Wigner map, and the reconstruction of the Jordan
//! symmetry from nothing but oracle evaluations.

use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{c64, inner, ComplexMatrix, C64};
use crate::random;
use crate::states::{equivalent, tp_amplitude, PureState};

use super::canonical::{BlockOperator, CanonicalSymmetry};
use super::{JordanSymmetry, DEFAULT_TRIALS};

/// Bound on `|tau(W w, W w') - tau(w, w')|`.
pub const WIGNER_TOL: f64 = 1e-8;
/// Bound on the density distance between a reconstructed Wigner map and the
/// oracle it was reconstructed from.
pub const RECONSTRUCT_TOL: f64 = 1e-8;
/// The normalized overlap that separates unitary from anti-unitary blocks
/// must exceed this in absolute value.
pub const ORIENTATION_GAP: f64 = 0.5;

const STREAM_WIGNER: u64 = 0x5749_474e;
const STREAM_VERIFY: u64 = 0x5645_5246;

/// A map on the pure states of a fixed algebra, known only through
/// evaluation. Implementations must be pure functions, safe to call
/// concurrently.
pub trait WignerOracle: Send + Sync {
    fn algebra(&self) -> &BlockAlgebra;
    fn apply(&self, omega: &PureState) -> PureState;
}

/// Wraps a closure as an oracle.
pub struct FnOracle<F> {
    algebra: BlockAlgebra,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&PureState) -> PureState + Send + Sync,
{
    pub fn new(algebra: BlockAlgebra, f: F) -> Self {
        Self { algebra, f }
    }
}

impl<F> WignerOracle for FnOracle<F>
where
    F: Fn(&PureState) -> PureState + Send + Sync,
{
    fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    fn apply(&self, omega: &PureState) -> PureState {
        (self.f)(omega)
    }
}

/// The Wigner map `omega -> omega o J` of a Jordan symmetry.
#[derive(Clone, Debug)]
pub struct JordanOracle {
    jordan: JordanSymmetry,
}

impl JordanOracle {
    pub fn jordan(&self) -> &JordanSymmetry {
        &self.jordan
    }
}

impl WignerOracle for JordanOracle {
    fn algebra(&self) -> &BlockAlgebra {
        self.jordan.algebra()
    }

    fn apply(&self, omega: &PureState) -> PureState {
        let alg = self.jordan.algebra();
        let s = omega.density().sa_coords();
        let m = self.jordan.matrix();
        let image: Vec<f64> = (0..s.len()).map(|k| (0..s.len()).map(|i| m[(i, k)] * s[i]).sum()).collect();
        let rho = AlgebraElement::from_sa_coords(alg, &image).expect("dimension matches");
        // Jordan symmetries send extreme points to extreme points, so the
        // image is a rank-one density in a single block
        let block = (0..alg.num_blocks())
            .max_by(|&a, &b| rho.block(a).trace().re.total_cmp(&rho.block(b).trace().re))
            .expect("at least one block");
        let eig = rho.block(block).hermitian_eig().expect("self-adjoint by construction");
        let top = eig.vectors.column(alg.dim(block) - 1);
        PureState::normalized(alg.clone(), block, top).expect("unit eigenvector")
    }
}

pub fn wigner_from_jordan(j: &JordanSymmetry) -> JordanOracle {
    JordanOracle { jordan: j.clone() }
}

/// Outcome of [`is_wigner`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerReport {
    pub trials: usize,
    pub seed: u64,
    pub max_tp_deviation: f64,
    pub tp_witness: Option<usize>,
    pub equivalence_violations: usize,
    pub equivalence_witness: Option<usize>,
    pub invalid_outputs: usize,
    pub passed: bool,
}

/// Sampled check that `W` preserves transition probabilities and maps
/// equivalent (inequivalent) pairs to equivalent (inequivalent) pairs. Even
/// trials draw both states from one block so equivalent pairs are always
/// exercised.
pub fn is_wigner(w: &dyn WignerOracle, trials: usize, seed: u64) -> WignerReport {
    let alg = w.algebra().clone();
    let mut report = WignerReport {
        trials,
        seed,
        max_tp_deviation: 0.0,
        tp_witness: None,
        equivalence_violations: 0,
        equivalence_witness: None,
        invalid_outputs: 0,
        passed: false,
    };
    for t in 0..trials {
        let mut rng = random::trial_rng(seed, STREAM_WIGNER, t as u64);
        let a = random::pure_state(&mut rng, &alg);
        let b = if t % 2 == 0 {
            random::pure_state_in_block(&mut rng, &alg, a.block())
        } else {
            random::pure_state(&mut rng, &alg)
        };
        let (wa, wb) = (w.apply(&a), w.apply(&b));
        if wa.algebra() != &alg || wb.algebra() != &alg {
            report.invalid_outputs += 1;
            continue;
        }
        let before = tp_amplitude(&a, &b).expect("same algebra");
        let after = tp_amplitude(&wa, &wb).expect("same algebra");
        let dev = (before - after).abs();
        if dev > report.max_tp_deviation {
            report.max_tp_deviation = dev;
            if dev >= WIGNER_TOL {
                report.tp_witness.get_or_insert(t);
            }
        }
        if equivalent(&a, &b).expect("same algebra") != equivalent(&wa, &wb).expect("same algebra") {
            report.equivalence_violations += 1;
            report.equivalence_witness.get_or_insert(t);
        }
    }
    report.passed = report.invalid_outputs == 0
        && report.equivalence_violations == 0
        && report.max_tp_deviation < WIGNER_TOL;
    report
}

/// Sample sizes for the checks run during reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReconstructOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { trials: DEFAULT_TRIALS, seed: 0 }
    }
}

/// Result of [`jordan_from_wigner`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub jordan: JordanSymmetry,
    /// Permutation and per-block (anti-)unitaries read off the oracle.
    pub canonical: CanonicalSymmetry,
    /// Worst density distance between the oracle and the Wigner map of the
    /// reconstructed symmetry over the verification sample.
    pub residual: f64,
}

fn superposition(alg: &BlockAlgebra, block: usize, k: usize, coeff: C64) -> PureState {
    let n = alg.dim(block);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![C64::default(); n];
    psi[0] = c64(s, 0.0);
    psi[k] = coeff * s;
    PureState::new(alg.clone(), block, psi).expect("unit vector")
}

fn image_in(w: &dyn WignerOracle, omega: &PureState, alg: &BlockAlgebra, block: usize) -> Result<Vec<C64>> {
    let out = w.apply(omega);
    if out.algebra() != alg {
        return Err(Error::OracleInconsistent("oracle output lives on another algebra".into()));
    }
    if out.block() != block {
        return Err(Error::OracleInconsistent(format!(
            "block {} expected for an image, got {}",
            block,
            out.block()
        )));
    }
    Ok(out.psi().to_vec())
}

/// Reads the implementing operator of block `i` off the oracle. Returns the
/// operator in canonical form.
fn reconstruct_block(w: &dyn WignerOracle, alg: &BlockAlgebra, i: usize, target: usize) -> Result<BlockOperator> {
    let n = alg.dim(i);
    let mut phis = Vec::with_capacity(n);
    for k in 0..n {
        phis.push(image_in(w, &PureState::basis(alg, i, k)?, alg, target)?);
    }
    let mut anti: Option<bool> = None;
    for k in 1..n {
        // lock the phase of phi_k to phi_0 through the image of (e_0 + e_k)/sqrt2
        let s = image_in(w, &superposition(alg, i, k, c64(1.0, 0.0)), alg, target)?;
        let (a0, ak) = (inner(&phis[0], &s), inner(&phis[k], &s));
        if a0.norm() < 0.25 || ak.norm() < 0.25 {
            return Err(Error::OracleInconsistent(format!(
                "image of (e_0 + e_{k})/sqrt2 has overlaps {:.3}, {:.3} with the basis images",
                a0.norm(),
                ak.norm()
            )));
        }
        let c = ak / a0;
        let c = c / c.norm();
        phis[k] = phis[k].iter().map(|z| z * c).collect();

        // (e_0 + i e_k)/sqrt2 goes to (phi_0 + i phi_k)/sqrt2 for a unitary
        // and to (phi_0 - i phi_k)/sqrt2 for an anti-unitary
        let t = image_in(w, &superposition(alg, i, k, c64(0.0, 1.0)), alg, target)?;
        let (b0, bk) = (inner(&phis[0], &t), inner(&phis[k], &t));
        if b0.norm() < 0.25 {
            return Err(Error::OracleInconsistent(format!("image of (e_0 + i e_{k})/sqrt2 misses phi_0")));
        }
        let r = bk / b0;
        let r = if r.norm() > 0.0 { r / r.norm() } else { r };
        let this = if r.im > ORIENTATION_GAP {
            false
        } else if r.im < -ORIENTATION_GAP {
            true
        } else {
            return Err(Error::OracleInconsistent(format!(
                "cannot decide unitary versus anti-unitary on block {i} (overlap {r})"
            )));
        };
        match anti {
            Some(prev) if prev != this => {
                return Err(Error::OracleInconsistent(format!("block {i} mixes unitary and anti-unitary behaviour")))
            }
            _ => anti = Some(this),
        }
    }
    let v = ComplexMatrix::from_columns(&phis);
    Ok(match anti.unwrap_or(false) {
        false => BlockOperator { u: v, antiunitary: false },
        // W(psi) = V conj(psi) = conj(conj(V) psi)
        true => BlockOperator { u: v.conj(), antiunitary: true },
    })
}

/// Reconstructs the Jordan symmetry `J` with `W(omega) = omega o J` from
/// oracle evaluations only.
///
/// The block permutation is read from the images of one basis state per
/// block. Inside a block the images of `e_k`, `(e_0 + e_k)/sqrt2` and
/// `(e_0 + i e_k)/sqrt2` fix the implementing operator up to one global
/// phase (kept from the image of `e_0`) and decide between the unitary and
/// the anti-unitary case. The result is validated as a Jordan symmetry and
/// compared with the oracle on a seeded sample.
pub fn jordan_from_wigner(w: &dyn WignerOracle, alg: &BlockAlgebra, opts: &ReconstructOptions) -> Result<Reconstruction> {
    if w.algebra() != alg {
        return Err(Error::AlgebraMismatch);
    }
    let pre = is_wigner(w, opts.trials, opts.seed);
    if !pre.passed {
        return Err(Error::OracleInconsistent(format!(
            "oracle fails the Wigner check (tau deviation {:e}, {} equivalence violations)",
            pre.max_tp_deviation, pre.equivalence_violations
        )));
    }

    let k = alg.num_blocks();
    let mut perm = Vec::with_capacity(k);
    for i in 0..k {
        let out = w.apply(&PureState::basis(alg, i, 0)?);
        if out.algebra() != alg {
            return Err(Error::OracleInconsistent("oracle output lives on another algebra".into()));
        }
        perm.push(out.block());
    }
    let mut ops = Vec::with_capacity(k);
    for (i, &target) in perm.iter().enumerate() {
        if alg.dim(target) != alg.dim(i) {
            return Err(Error::OracleInconsistent(format!("block {i} is sent to block {target} of another size")));
        }
        ops.push(reconstruct_block(w, alg, i, target)?);
    }
    let canonical = CanonicalSymmetry::new(alg.clone(), perm, ops)
        .map_err(|e| Error::OracleInconsistent(format!("block images do not form a permutation: {e}")))?;

    let jordan = JordanSymmetry::validate(canonical.jordan_map(), opts.trials, opts.seed)
        .map_err(|e| Error::OracleInconsistent(format!("reconstructed map is not Jordan: {e}")))?;

    let rebuilt = wigner_from_jordan(&jordan);
    let mut residual: f64 = 0.0;
    for t in 0..opts.trials {
        let mut rng = random::trial_rng(opts.seed, STREAM_VERIFY, t as u64);
        let omega = random::pure_state(&mut rng, alg);
        let (a, b) = (w.apply(&omega), rebuilt.apply(&omega));
        let d = if a.block() == b.block() { a.ray_distance(&b)? } else { f64::INFINITY };
        residual = residual.max(d);
    }
    if residual >= RECONSTRUCT_TOL {
        return Err(Error::OracleInconsistent(format!(
            "reconstruction disagrees with the oracle (density distance {residual:e})"
        )));
    }
    Ok(Reconstruction { jordan, canonical, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{canonical_symmetry, rng, TransposeMode};
    use crate::symmetry::JordanMap;

    fn alg(dims: &[usize]) -> BlockAlgebra {
        BlockAlgebra::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn identity_oracle_round_trip() {
        let a = alg(&[3, 1]);
        let id = JordanSymmetry::identity(&a);
        let w = wigner_from_jordan(&id);
        let p = PureState::basis(&a, 0, 2).unwrap();
        assert!(w.apply(&p).ray_distance(&p).unwrap() < 1e-12);
        assert!(is_wigner(&w, 50, 1).passed);
        let rec = jordan_from_wigner(&w, &a, &ReconstructOptions::default()).unwrap();
        assert!(rec.jordan.distance(&JordanMap::identity(&a)).unwrap() < 1e-10);
    }

    #[test]
    fn block_swap_oracle() {
        let a = alg(&[2, 2]);
        let c = CanonicalSymmetry::new(
            a.clone(),
            vec![1, 0],
            vec![
                BlockOperator { u: ComplexMatrix::identity(2), antiunitary: false },
                BlockOperator { u: ComplexMatrix::identity(2), antiunitary: false },
            ],
        )
        .unwrap();
        let j = JordanSymmetry::try_new(c.jordan_map()).unwrap();
        let w = wigner_from_jordan(&j);
        for b in 0..2 {
            assert_eq!(w.apply(&PureState::basis(&a, b, 1).unwrap()).block(), 1 - b);
        }
    }

    #[test]
    fn collapsing_oracle_is_not_wigner() {
        let a = alg(&[2]);
        let fixed = PureState::basis(&a, 0, 0).unwrap();
        let w = FnOracle::new(a.clone(), move |_| fixed.clone());
        let report = is_wigner(&w, 20, 0);
        assert!(!report.passed);
        assert!(report.tp_witness.is_some());
        assert!(matches!(jordan_from_wigner(&w, &a, &ReconstructOptions::default()), Err(Error::OracleInconsistent(_))));
    }

    #[test]
    fn non_unitary_conjugation_is_rejected() {
        let a = alg(&[2]);
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        let c = CanonicalSymmetry::new(a.clone(), vec![0], vec![BlockOperator { u: m, antiunitary: false }]).unwrap();
        assert!(!is_wigner(&c.oracle(), 50, 0).passed);
        let err = jordan_from_wigner(&c.oracle(), &a, &ReconstructOptions::default());
        assert!(matches!(err, Err(Error::OracleInconsistent(_))));
    }

    #[test]
    fn conjugate_oracle_reconstructs_transpose() {
        let a = alg(&[2]);
        let w = FnOracle::new(a.clone(), |p: &PureState| {
            PureState::new(p.algebra().clone(), p.block(), p.psi().iter().map(|z| z.conj()).collect()).unwrap()
        });
        let rec = jordan_from_wigner(&w, &a, &ReconstructOptions::default()).unwrap();
        assert!(rec.canonical.blocks()[0].antiunitary);
        assert!(rec.jordan.distance(&JordanMap::transpose_map(&a)).unwrap() < 1e-8);
    }

    #[test]
    fn random_round_trips() {
        for (seed, dims) in [(1u64, vec![3]), (2, vec![2, 2]), (3, vec![4, 3, 1])] {
            let a = alg(&dims);
            let c = canonical_symmetry(&mut rng(seed), &a, TransposeMode::Random);
            let j = JordanSymmetry::try_new(c.jordan_map()).unwrap();
            let rec = jordan_from_wigner(&wigner_from_jordan(&j), &a, &ReconstructOptions::default()).unwrap();
            assert!(rec.jordan.distance(&j).unwrap() < 1e-8, "dims {dims:?}");
            assert_eq!(rec.canonical.perm(), c.perm());
        }
    }
}
