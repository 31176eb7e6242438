// SPDX-License-Identifier: Apache-2.0

//! Central decomposition of a Jordan symmetry into a homomorphism part, an
//! anti-homomorphism part and a part that is both.
//!
//! With `A1` the span of the defects `J(ab) - J(a)J(b)` and `A2` the span of
//! `J(ab) - J(b)J(a)`, let `q1`, `q2`, `q3` project onto the joint kernels of
//! `A1`, `A2` and `A1 + A2`. Then `p1 = 1 - q2`, `p2 = 1 - q1` and `p3 = q3`
//! are central, mutually orthogonal and sum to the unit; `a -> J(a)p1` is a
//! homomorphism, `a -> J(a)p2` an anti-homomorphism and `a -> J(a)p3` both.
//!
//! For a fixed linear `J` the defects are bilinear in `(a, b)`, so the pairs of
//! hermitian basis elements already span `A1` and `A2`.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::algebra::{hermitian_basis, AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{svd, ComplexMatrix, C64, RANK_CUTOFF};
use crate::symmetry::{JordanMap, JordanSymmetry, JORDAN_TOL};

/// Singular values of the defect family below this are numerical noise of a
/// defect that vanishes identically.
pub const DEFECT_FLOOR: f64 = 1e-8;
/// Bound for orthogonality, completeness and commutator residuals.
pub const PROJECTION_TOL: f64 = 1e-9;
/// Bound for the distance of each block of a `p` from `0` or the identity.
pub const BLOCK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DefectKind {
    /// `J(ab) - J(a)J(b)`
    #[serde(rename = "ONE")]
    One,
    /// `J(ab) - J(b)J(a)`
    #[serde(rename = "TWO")]
    Two,
}

/// Orthonormal (Hilbert-Schmidt) basis of a defect span, as `N x N` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectSpace {
    pub algebra: BlockAlgebra,
    pub kind: DefectKind,
    pub basis: Vec<ComplexMatrix>,
}

impl DefectSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    Hom,
    Anti,
    Both,
}

impl BlockLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockLabel::Hom => "HOM",
            BlockLabel::Anti => "ANTI",
            BlockLabel::Both => "BOTH",
        }
    }
}

impl std::fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for BlockLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ThomsenResiduals {
    /// max `||p_i p_j||` over `i != j`
    pub orthogonality: f64,
    /// `||p1 + p2 + p3 - 1||`
    pub completeness: f64,
    /// max `||p b - b p||` over the hermitian basis
    pub centrality: f64,
    /// max distance of a block of some `p` from `0` or the identity
    pub block_deviation: f64,
    /// max `||(J(ab) - J(a)J(b)) p1||` over basis pairs
    pub hom: f64,
    /// max `||(J(ab) - J(b)J(a)) p2||` over basis pairs
    pub anti: f64,
    /// max of both defects against `p3`
    pub both: f64,
}

/// The projections `p1`, `p2`, `p3` together with the intermediate `q`s.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomsenDecomposition {
    pub algebra: BlockAlgebra,
    pub p1: AlgebraElement,
    pub p2: AlgebraElement,
    pub p3: AlgebraElement,
    pub q1: AlgebraElement,
    pub q2: AlgebraElement,
    pub q3: AlgebraElement,
    pub block_labels: Vec<BlockLabel>,
    pub residuals: ThomsenResiduals,
}

/// JSON form of a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThomsenReport {
    pub p1_blocks: Vec<u8>,
    pub p2_blocks: Vec<u8>,
    pub p3_blocks: Vec<u8>,
    pub labels: Vec<BlockLabel>,
    pub residuals: ThomsenResiduals,
}

fn indicator(p: &AlgebraElement) -> Vec<u8> {
    p.blocks().iter().map(|b| u8::from(b.trace().re > 0.5 * b.rows() as f64)).collect()
}

impl ThomsenDecomposition {
    pub fn report(&self) -> ThomsenReport {
        ThomsenReport {
            p1_blocks: indicator(&self.p1),
            p2_blocks: indicator(&self.p2),
            p3_blocks: indicator(&self.p3),
            labels: self.block_labels.clone(),
            residuals: self.residuals.clone(),
        }
    }

    pub fn projections(&self) -> [&AlgebraElement; 3] {
        [&self.p1, &self.p2, &self.p3]
    }
}

/// All defects of both kinds over ordered pairs of hermitian basis elements
/// taken in `order`.
fn defects(j: &JordanMap, order: &[usize]) -> (Vec<AlgebraElement>, Vec<AlgebraElement>) {
    let basis = hermitian_basis(j.algebra());
    let images: Vec<AlgebraElement> = basis.iter().map(|e| j.apply(e).expect("same algebra")).collect();
    let mut one = Vec::with_capacity(order.len() * order.len());
    let mut two = Vec::with_capacity(order.len() * order.len());
    for &a in order {
        for &b in order {
            let jab = j.apply(&basis[a].multiply(&basis[b]).expect("same algebra")).expect("same algebra");
            one.push(jab.sub(&images[a].multiply(&images[b]).expect("same algebra")).expect("same algebra"));
            two.push(jab.sub(&images[b].multiply(&images[a]).expect("same algebra")).expect("same algebra"));
        }
    }
    (one, two)
}

/// Orthonormal basis of the span of `elements`: left singular vectors of the
/// matrix whose columns are the flattened blocks.
fn orthonormal_span(alg: &BlockAlgebra, elements: &[AlgebraElement]) -> Vec<ComplexMatrix> {
    let dims = alg.dims();
    let len: usize = dims.iter().map(|n| n * n).sum();
    if elements.is_empty() {
        return vec![];
    }
    let mut stack = DMatrix::<C64>::zeros(len, elements.len());
    for (c, el) in elements.iter().enumerate() {
        let mut r = 0;
        for b in el.blocks() {
            for z in b.row_major() {
                stack[(r, c)] = z;
                r += 1;
            }
        }
    }
    let svd = svd(&stack);
    let smax = svd.values.first().copied().unwrap_or(0.0);
    let cutoff = (RANK_CUTOFF * smax).max(DEFECT_FLOOR);
    svd.u[..svd.above(cutoff)]
        .iter()
        .map(|col| {
            let mut blocks = Vec::with_capacity(dims.len());
            let mut r = 0;
            for &n in dims {
                blocks.push(ComplexMatrix::from_row_major(n, n, col[r..r + n * n].to_vec()).expect("finite"));
                r += n * n;
            }
            AlgebraElement::new(alg.clone(), blocks).expect("sizes match").to_full()
        })
        .collect()
}

fn spaces_from(j: &JordanMap, order: &[usize]) -> (DefectSpace, DefectSpace, Vec<AlgebraElement>, Vec<AlgebraElement>) {
    let alg = j.algebra();
    let (one, two) = defects(j, order);
    let s1 = DefectSpace { algebra: alg.clone(), kind: DefectKind::One, basis: orthonormal_span(alg, &one) };
    let s2 = DefectSpace { algebra: alg.clone(), kind: DefectKind::Two, basis: orthonormal_span(alg, &two) };
    (s1, s2, one, two)
}

/// Spans `A1` and `A2` from all ordered pairs of hermitian basis elements.
pub fn defect_spaces(j: &JordanSymmetry) -> (DefectSpace, DefectSpace) {
    let order: Vec<usize> = (0..j.algebra().sa_dim()).collect();
    let (s1, s2, _, _) = spaces_from(j, &order);
    (s1, s2)
}

pub fn thomsen_decompose(j: &JordanSymmetry) -> Result<ThomsenDecomposition> {
    let order: Vec<usize> = (0..j.algebra().sa_dim()).collect();
    decompose_in_order(j, &order)
}

/// Decomposition with the hermitian basis enumerated in `order`; the result
/// must not depend on it.
pub fn decompose_in_order(j: &JordanSymmetry, order: &[usize]) -> Result<ThomsenDecomposition> {
    let alg = j.algebra();
    let d = alg.sa_dim();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..d).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch(format!("order must be a permutation of 0..{d}")));
    }
    let n = alg.total_dim();
    let (s1, s2, one, two) = spaces_from(j, order);
    let both: Vec<ComplexMatrix> = s1.basis.iter().chain(&s2.basis).cloned().collect();
    let q1 = AlgebraElement::from_full(alg, &ComplexMatrix::kernel_projection(&s1.basis, n)?)?;
    let q2 = AlgebraElement::from_full(alg, &ComplexMatrix::kernel_projection(&s2.basis, n)?)?;
    let q3 = AlgebraElement::from_full(alg, &ComplexMatrix::kernel_projection(&both, n)?)?;
    let unit = AlgebraElement::unit(alg);
    let p1 = unit.sub(&q2)?;
    let p2 = unit.sub(&q1)?;
    let p3 = q3.clone();

    let mut residuals = projection_residuals(alg, [&p1, &p2, &p3]);
    let worst = |defs: &[AlgebraElement], p: &AlgebraElement| {
        defs.iter().map(|x| x.multiply(p).expect("same algebra").norm()).fold(0.0, f64::max)
    };
    residuals.hom = worst(&one, &p1);
    residuals.anti = worst(&two, &p2);
    residuals.both = worst(&one, &p3).max(worst(&two, &p3));

    let problems = [
        ("orthogonality", residuals.orthogonality, PROJECTION_TOL),
        ("completeness", residuals.completeness, PROJECTION_TOL),
        ("centrality", residuals.centrality, PROJECTION_TOL),
        ("block deviation", residuals.block_deviation, BLOCK_TOL),
        ("homomorphism part", residuals.hom, JORDAN_TOL),
        ("anti-homomorphism part", residuals.anti, JORDAN_TOL),
        ("commutative part", residuals.both, JORDAN_TOL),
    ];
    if let Some((name, value, tol)) = problems.iter().find(|(_, v, tol)| v.partial_cmp(tol) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::DecompositionInconsistent(format!("{name} residual {value:e} exceeds {tol:e}")));
    }

    let (i1, i2, i3) = (indicator(&p1), indicator(&p2), indicator(&p3));
    let mut block_labels = Vec::with_capacity(alg.num_blocks());
    for (i, pattern) in i1.into_iter().zip(i2).zip(i3).map(|((a, b), c)| (a, b, c)).enumerate() {
        let label = match pattern {
            (1, 0, 0) => BlockLabel::Hom,
            (0, 1, 0) => BlockLabel::Anti,
            (0, 0, 1) => BlockLabel::Both,
            other => {
                return Err(Error::DecompositionInconsistent(format!("block {i} has indicator pattern {other:?}")))
            }
        };
        block_labels.push(label);
    }
    Ok(ThomsenDecomposition { algebra: alg.clone(), p1, p2, p3, q1, q2, q3, block_labels, residuals })
}

fn projection_residuals(alg: &BlockAlgebra, ps: [&AlgebraElement; 3]) -> ThomsenResiduals {
    let mut r = ThomsenResiduals::default();
    for i in 0..3 {
        for k in 0..3 {
            if i != k {
                r.orthogonality = r.orthogonality.max(ps[i].multiply(ps[k]).expect("same algebra").norm());
            }
        }
    }
    let sum = ps[0].add(ps[1]).and_then(|s| s.add(ps[2])).expect("same algebra");
    r.completeness = sum.distance(&AlgebraElement::unit(alg)).expect("same algebra");
    let c = centrality_of(alg, &ps);
    r.centrality = c.max_commutator;
    r.block_deviation = c.block_deviation;
    r
}

pub fn classify_block(dec: &ThomsenDecomposition, i: usize) -> Result<BlockLabel> {
    dec.block_labels
        .get(i)
        .copied()
        .ok_or(Error::IndexOutOfRange { index: i, len: dec.block_labels.len() })
}

/// Outcome of [`verify_centrality`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralityReport {
    pub max_commutator: f64,
    /// `(projection index 1..=3, hermitian basis index)` of the first
    /// commutator at or above tolerance.
    pub commutator_witness: Option<(usize, usize)>,
    pub block_deviation: f64,
    /// `(projection index 1..=3, block)` of the first block that is neither
    /// `0` nor the identity.
    pub deviation_witness: Option<(usize, usize)>,
    pub completeness: f64,
    pub passed: bool,
}

fn centrality_of(alg: &BlockAlgebra, ps: &[&AlgebraElement; 3]) -> CentralityReport {
    let basis = hermitian_basis(alg);
    let mut report = CentralityReport {
        max_commutator: 0.0,
        commutator_witness: None,
        block_deviation: 0.0,
        deviation_witness: None,
        completeness: 0.0,
        passed: false,
    };
    for (pi, p) in ps.iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            let c = p.commutator(b).expect("same algebra").norm();
            report.max_commutator = report.max_commutator.max(c);
            if c >= PROJECTION_TOL && report.commutator_witness.is_none() {
                report.commutator_witness = Some((pi + 1, bi));
            }
        }
        for (k, blk) in p.blocks().iter().enumerate() {
            let n = blk.rows();
            let to_zero = blk.frobenius_norm();
            let to_one = (blk - &ComplexMatrix::identity(n)).frobenius_norm();
            let dev = to_zero.min(to_one);
            report.block_deviation = report.block_deviation.max(dev);
            if dev >= BLOCK_TOL && report.deviation_witness.is_none() {
                report.deviation_witness = Some((pi + 1, k));
            }
        }
    }
    report
}

/// Checks that `p1`, `p2`, `p3` commute with the hermitian basis, are sums of
/// block identities and add up to the unit.
pub fn verify_centrality(dec: &ThomsenDecomposition, alg: &BlockAlgebra) -> Result<CentralityReport> {
    if &dec.algebra != alg || dec.projections().iter().any(|p| p.algebra() != alg) {
        return Err(Error::AlgebraMismatch);
    }
    let mut report = centrality_of(alg, &dec.projections());
    let sum = dec.p1.add(&dec.p2)?.add(&dec.p3)?;
    report.completeness = sum.distance(&AlgebraElement::unit(alg))?;
    report.passed = report.max_commutator < PROJECTION_TOL
        && report.block_deviation < BLOCK_TOL
        && report.completeness < PROJECTION_TOL;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::JordanMap;

    fn alg(dims: &[usize]) -> BlockAlgebra {
        BlockAlgebra::new(dims.to_vec()).unwrap()
    }

    fn partial_transpose(a: &BlockAlgebra, mask: &[bool]) -> JordanSymmetry {
        let mask = mask.to_vec();
        let m = JordanMap::from_sa_fn(a, |x| {
            let blocks = x
                .blocks()
                .iter()
                .zip(&mask)
                .map(|(b, &t)| if t { b.transpose() } else { b.clone() })
                .collect();
            AlgebraElement::new(a.clone(), blocks).unwrap()
        });
        JordanSymmetry::try_new(m).unwrap()
    }

    #[test]
    fn identity_spaces() {
        let a = alg(&[2]);
        let (s1, s2) = defect_spaces(&JordanSymmetry::identity(&a));
        assert!(s1.is_empty());
        // commutators of M_2 span the traceless matrices
        assert_eq!(s2.dim(), 3);
        let (t1, t2) = defect_spaces(&partial_transpose(&a, &[true]));
        assert_eq!(t1.dim(), 3);
        assert!(t2.is_empty());
    }

    #[test]
    fn mixed_decomposition() {
        let a = alg(&[2, 3, 1]);
        let dec = thomsen_decompose(&partial_transpose(&a, &[false, true, false])).unwrap();
        assert_eq!(dec.block_labels, vec![BlockLabel::Hom, BlockLabel::Anti, BlockLabel::Both]);
        let r = dec.report();
        assert_eq!((r.p1_blocks, r.p2_blocks, r.p3_blocks), (vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]));
        assert!(verify_centrality(&dec, &a).unwrap().passed);
        assert_eq!(classify_block(&dec, 1).unwrap(), BlockLabel::Anti);
        assert!(matches!(classify_block(&dec, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn commutative_algebra_is_both() {
        let a = alg(&[1, 1]);
        let dec = thomsen_decompose(&JordanSymmetry::identity(&a)).unwrap();
        assert_eq!(dec.block_labels, vec![BlockLabel::Both; 2]);
        assert!(dec.p3.distance(&AlgebraElement::unit(&a)).unwrap() < 1e-12);
    }

    #[test]
    fn non_central_projection_fails() {
        let a = alg(&[2]);
        let mut dec = thomsen_decompose(&JordanSymmetry::identity(&a)).unwrap();
        dec.p1 = AlgebraElement::embed(&a, 0, ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        dec.p2 = AlgebraElement::embed(&a, 0, ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let report = verify_centrality(&dec, &a).unwrap();
        assert!(!report.passed);
        assert_eq!(report.commutator_witness.map(|w| w.0), Some(1));
        assert_eq!(report.deviation_witness, Some((1, 0)));
        assert!(report.completeness < 1e-12);
    }

    #[test]
    fn json_report() {
        let a = alg(&[1]);
        let dec = thomsen_decompose(&JordanSymmetry::identity(&a)).unwrap();
        let v = serde_json::to_value(dec.report()).unwrap();
        assert_eq!(v["labels"], serde_json::json!(["BOTH"]));
        assert_eq!(v["p3_blocks"], serde_json::json!([1]));
    }
}
