// SPDX-License-Identifier: Apache-2.0

//! Implementing (anti-)unitaries of a Jordan symmetry on a full matrix block.
//!
//! Write `alpha` for the restriction of `J` to the source block `j` of block
//! `i`, viewed as a map `M_n -> M_n`. In the homomorphism case
//! `alpha(a) = u* a u` and `u` is recovered from one fixed unit vector `chi`:
//! with `e_phi = alpha^{-1}(|chi><chi|)` and `phi` its range vector, the
//! relation `u alpha(a) chi = a phi` applied to `a_k = |e_k><phi|` gives
//! `u w_k = e_k` for `w_k = alpha(a_k) chi`. The anti-homomorphism case
//! `alpha(a) = u* a^T u` reduces to the first by composing with the
//! transpose.

use serde::{Serialize, Serializer};

use crate::algebra::{hermitian_basis, AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::symmetry::{JordanMap, JordanSymmetry, JORDAN_TOL};
use crate::thomsen::BlockLabel;

/// Unitarity bound for extracted operators.
pub const UNITARY_TOL: f64 = 1e-9;
/// Entries below this are skipped when fixing the phase.
pub const PHASE_THRESHOLD: f64 = 1e-8;
/// Bound on the verification residual.
pub const IMPLEMENTATION_TOL: f64 = 1e-8;

pub const PHASE_CONVENTION: &str = "first-entry-positive";

#[derive(Clone, Debug, PartialEq)]
pub struct ImplementingOperator {
    pub block: usize,
    pub u: ComplexMatrix,
    /// `u` followed by entrywise complex conjugation.
    pub antiunitary: bool,
}

impl Serialize for ImplementingOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            block: usize,
            u: &'a ComplexMatrix,
            antiunitary: bool,
            phase_convention: &'static str,
        }
        Repr { block: self.block, u: &self.u, antiunitary: self.antiunitary, phase_convention: PHASE_CONVENTION }
            .serialize(s)
    }
}

impl ImplementingOperator {
    /// `u* a u`, or `u* conj(a) u` for an anti-unitary.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let a = if self.antiunitary { a.conj() } else { a.clone() };
        &(&self.u.adjoint() * &a) * &self.u
    }

    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.u.adjoint() * &self.u) - &ComplexMatrix::identity(self.u.cols())).max_abs()
    }
}

/// Multiplies `u` by the phase that makes the first entry of its first column
/// with modulus above [`PHASE_THRESHOLD`] real positive.
pub fn canonical_phase(u: &ComplexMatrix) -> ComplexMatrix {
    let first = (0..u.rows()).map(|r| u.get(r, 0)).find(|z| z.norm() > PHASE_THRESHOLD);
    match first {
        Some(z) => u.scale(z.conj() / z.norm()),
        None => u.clone(),
    }
}

/// The block `j` with `J(1_j) = 1_i`.
pub fn source_block(j: &JordanMap, i: usize) -> Result<usize> {
    let alg = j.algebra();
    alg.check_block(i)?;
    let n = alg.dim(i);
    let target = ComplexMatrix::identity(n);
    (0..alg.num_blocks())
        .filter(|&k| alg.dim(k) == n)
        .find(|&k| {
            let image = j.apply(&AlgebraElement::block_identity(alg, k).expect("block exists")).expect("same algebra");
            (image.block(i) - &target).max_abs() < 1e-6
        })
        .ok_or_else(|| Error::SingularExtraction(format!("no block is mapped onto block {i}")))
}

/// `alpha(a) = J(a embedded in block src)` restricted to block `dst`.
fn restricted(j: &JordanMap, src: usize, dst: usize, a: &ComplexMatrix) -> ComplexMatrix {
    let el = AlgebraElement::embed(j.algebra(), src, a.clone()).expect("size matches");
    j.apply(&el).expect("same algebra").block(dst).clone()
}

fn unit(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::default(); n];
    v[k] = c64(1.0, 0.0);
    v
}

/// Decides between homomorphism and anti-homomorphism on block `i` from one
/// product: `alpha(E_01 E_10)` against `alpha(E_01) alpha(E_10)` and the
/// reversed product.
pub fn block_kind(j: &JordanMap, i: usize) -> Result<BlockLabel> {
    let src = source_block(j, i)?;
    let n = j.algebra().dim(i);
    if n == 1 {
        return Ok(BlockLabel::Both);
    }
    let e01 = ComplexMatrix::outer(&unit(n, 0), &unit(n, 1));
    let e10 = e01.adjoint();
    let lhs = restricted(j, src, i, &(&e01 * &e10));
    let (x, y) = (restricted(j, src, i, &e01), restricted(j, src, i, &e10));
    let hom = (&lhs - &(&x * &y)).frobenius_norm();
    let anti = (&lhs - &(&y * &x)).frobenius_norm();
    if hom < JORDAN_TOL {
        Ok(BlockLabel::Hom)
    } else if anti < JORDAN_TOL {
        Ok(BlockLabel::Anti)
    } else {
        Err(Error::KindMismatch(format!(
            "block {i} is neither multiplicative ({hom:e}) nor anti-multiplicative ({anti:e})"
        )))
    }
}

pub fn extract_unitary(j: &JordanSymmetry, block: usize, kind: BlockLabel) -> Result<ImplementingOperator> {
    j.algebra().check_block(block)?;
    let chi = unit(j.algebra().dim(block), 0);
    extract_with_chi(j, block, kind, &chi)
}

/// [`extract_unitary`] with an arbitrary unit vector `chi` in place of the
/// first basis vector.
pub fn extract_with_chi(j: &JordanSymmetry, block: usize, kind: BlockLabel, chi: &[C64]) -> Result<ImplementingOperator> {
    let alg = j.algebra();
    alg.check_block(block)?;
    let n = alg.dim(block);
    if chi.len() != n {
        return Err(Error::DimensionMismatch(format!("chi has length {}, block has dimension {n}", chi.len())));
    }
    let norm = crate::matrix::vec_norm(chi);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!("chi has norm {norm}")));
    }
    let found = block_kind(j, block)?;
    if n == 1 {
        return Ok(ImplementingOperator { block, u: ComplexMatrix::identity(1), antiunitary: kind == BlockLabel::Anti });
    }
    if found != kind {
        return Err(Error::KindMismatch(format!("block {block} is {found}, requested {kind}")));
    }
    let anti = kind == BlockLabel::Anti;
    let src = source_block(j, block)?;
    // beta = alpha o transpose in the anti case
    let beta = |a: &ComplexMatrix| {
        let a = if anti { a.transpose() } else { a.clone() };
        restricted(j, src, block, &a)
    };

    let inverse = j.inverse()?;
    let e_chi = ComplexMatrix::outer(chi, chi);
    let e_phi = restricted(&inverse, block, src, &e_chi);
    let e_phi = if anti { e_phi.transpose() } else { e_phi };
    let eig = e_phi
        .hermitian_part()
        .hermitian_eig()
        .map_err(|e| Error::SingularExtraction(format!("preimage of e_chi: {e}")))?;
    let top = eig.values[n - 1];
    let second = eig.values[n - 2];
    if (top - 1.0).abs() > 1e-6 || second.abs() > 1e-6 {
        return Err(Error::SingularExtraction(format!(
            "preimage of e_chi is not a rank-one projection (eigenvalues {second:e}, {top:e})"
        )));
    }
    let phi = eig.vectors.column(n - 1);

    let columns: Vec<Vec<C64>> = (0..n)
        .map(|k| beta(&ComplexMatrix::outer(&unit(n, k), &phi)).mul_vec(chi))
        .collect();
    let w = ComplexMatrix::from_columns(&columns);
    let u = canonical_phase(&w.adjoint());
    let op = ImplementingOperator { block, u, antiunitary: anti };
    let defect = op.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::SingularExtraction(format!("extracted operator has unitarity defect {defect:e}")));
    }
    Ok(op)
}

/// Residuals `||alpha(e) - u* e u||` (or with `conj(e)`) over the hermitian
/// basis of the source block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplementationReport {
    pub block: usize,
    pub source_block: Option<usize>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub witness: Option<usize>,
    pub unitarity_defect: f64,
    pub passed: bool,
}

pub fn verify_implementation(j: &JordanMap, op: &ImplementingOperator) -> Result<ImplementationReport> {
    let alg = j.algebra();
    alg.check_block(op.block)?;
    let n = alg.dim(op.block);
    if op.u.rows() != n || op.u.cols() != n {
        return Err(Error::DimensionMismatch(format!("operator must be {n}x{n}")));
    }
    let mut report = ImplementationReport {
        block: op.block,
        source_block: None,
        residuals: vec![],
        max_residual: f64::INFINITY,
        witness: None,
        unitarity_defect: op.unitarity_defect(),
        passed: false,
    };
    let Ok(src) = source_block(j, op.block) else {
        return Ok(report);
    };
    report.source_block = Some(src);
    let local = BlockAlgebra::new(vec![n]).expect("positive dimension");
    report.residuals = hermitian_basis(&local)
        .iter()
        .map(|e| (&restricted(j, src, op.block, e.block(0)) - &op.conjugate(e.block(0))).frobenius_norm())
        .collect();
    report.max_residual = report.residuals.iter().copied().fold(0.0, f64::max);
    report.witness = report.residuals.iter().position(|&r| r >= IMPLEMENTATION_TOL);
    report.passed = report.max_residual < IMPLEMENTATION_TOL && report.unitarity_defect < UNITARY_TOL;
    Ok(report)
}

/// `min_{|z| = 1} ||u1 - z u2||` (Frobenius), attained at the phase of
/// `Tr(u2* u1)`.
pub fn phase_distance(op1: &ImplementingOperator, op2: &ImplementingOperator) -> Result<f64> {
    if op1.block != op2.block || op1.antiunitary != op2.antiunitary {
        return Err(Error::FlagMismatch);
    }
    if op1.u.rows() != op2.u.rows() || op1.u.cols() != op2.u.cols() {
        return Err(Error::DimensionMismatch("operators differ in size".into()));
    }
    let t = (&op2.u.adjoint() * &op1.u).trace();
    let z = if t.norm() > 0.0 { t / t.norm() } else { c64(1.0, 0.0) };
    Ok((&op1.u - &op2.u.scale(z)).frobenius_norm())
}
