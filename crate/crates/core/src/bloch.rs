// SPDX-License-Identifier: Apache-2.0

//! Bloch-ball geometry of `M_2`, two-dimensional corners of a block, the
//! rotations a Jordan symmetry induces on them, and orientation
//! classification.
//!
//! A Jordan map acts on observables; the induced rotation describes its dual
//! action on densities, so `R(J1 o J2) = R(J2) R(J1)`.

use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{c64, inner, projector_onto, vec_norm, ComplexMatrix, C64};
use crate::states::{equivalent, tp_amplitude, PureState, State};
use crate::symmetry::{kadison_apply, JordanMap, JordanSymmetry, KadisonView};
use crate::thomsen::{thomsen_decompose, BlockLabel};

/// Slack on the unit ball.
pub const BALL_TOL: f64 = 1e-12;
/// Slack on the unit sphere.
pub const SPHERE_TOL: f64 = 1e-9;
/// Bound on `||R^T R - 1||` and `||det R| - 1|`.
pub const ROTATION_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        let norm = v.norm();
        if !norm.is_finite() || norm > 1.0 + BALL_TOL {
            return Err(Error::OutOfBall { norm });
        }
        Ok(v)
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// `rho(v) = (1 + x sx + y sy + z sz) / 2`.
pub fn bloch_to_density(v: BlochVector) -> Result<ComplexMatrix> {
    let norm = v.norm();
    if !norm.is_finite() || norm > 1.0 + BALL_TOL {
        return Err(Error::OutOfBall { norm });
    }
    let h = 0.5;
    ComplexMatrix::from_row_major(
        2,
        2,
        vec![c64(h * (1.0 + v.z), 0.0), c64(h * v.x, -h * v.y), c64(h * v.x, h * v.y), c64(h * (1.0 - v.z), 0.0)],
    )
}

pub fn density_to_bloch(rho: &ComplexMatrix) -> Result<BlochVector> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::NotDensity(format!("shape {}x{}", rho.rows(), rho.cols())));
    }
    let dev = rho.hermitian_deviation();
    if dev > DENSITY_TOL {
        return Err(Error::NotDensity(format!("hermitian deviation {dev:e}")));
    }
    let tr = rho.trace();
    if (tr - c64(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    let (r00, r01, r10, r11) = (rho.get(0, 0), rho.get(0, 1), rho.get(1, 0), rho.get(1, 1));
    let v = BlochVector { x: (r01 + r10).re, y: (r10 - r01).im, z: (r00 - r11).re };
    if v.norm() > 1.0 + DENSITY_TOL {
        return Err(Error::NotDensity(format!("negative eigenvalue (Bloch norm {})", v.norm())));
    }
    Ok(v)
}

/// `(1 + <x, y>) / 2` for unit vectors.
pub fn sphere_tp(x: BlochVector, y: BlochVector) -> Result<f64> {
    for v in [x, y] {
        let norm = v.norm();
        if (norm - 1.0).abs() > SPHERE_TOL {
            return Err(Error::NotOnSphere { norm });
        }
    }
    Ok(0.5 * (1.0 + x.dot(y)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rotation3 {
    pub m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// max entry of `R^T R - 1`
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| self.m[k][i] * self.m[k][j]).sum();
                worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|k| self.m[i][k] * v[k]).sum())
    }

    /// `self * other`
    pub fn then_after(&self, other: &Self) -> Self {
        Self { m: std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum())) }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        (0..9).map(|k| (self.m[k / 3][k % 3] - other.m[k / 3][k % 3]).abs()).fold(0.0, f64::max)
    }
}

/// Rotation of an affine, center-preserving map of 2x2 densities, read off
/// the images of the three coordinate axes.
pub fn rotation_of_density_map(f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Rotation3> {
    let center = density_to_bloch(&f(&bloch_to_density(BlochVector { x: 0.0, y: 0.0, z: 0.0 })?)?)?;
    if center.norm() > ROTATION_TOL {
        return Err(Error::NotJordan(format!("center moves to distance {:e}", center.norm())));
    }
    let mut m = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut axis = [0.0; 3];
        axis[k] = 1.0;
        let image = density_to_bloch(&f(&bloch_to_density(BlochVector::from_array(axis)?)?)?)?.to_array();
        for i in 0..3 {
            m[i][k] = image[i];
        }
    }
    let r = Rotation3 { m };
    let defect = r.orthogonality_defect().max((r.det().abs() - 1.0).abs());
    if defect > ROTATION_TOL {
        return Err(Error::NotJordan(format!("induced map is not orthogonal (defect {defect:e})")));
    }
    Ok(r)
}

/// Rotation induced on Bloch coordinates by a Jordan map of `M_2`.
pub fn induced_rotation(j: &JordanMap) -> Result<Rotation3> {
    if j.algebra().dims() != [2] {
        return Err(Error::InvalidAlgebra(format!("expected M_2, got {:?}", j.algebra().dims())));
    }
    let alg = j.algebra().clone();
    rotation_of_density_map(|rho| {
        let coords = AlgebraElement::embed(&alg, 0, rho.clone())?.sa_coords();
        let m = j.matrix();
        let image: Vec<f64> = (0..coords.len()).map(|k| (0..coords.len()).map(|i| m[(i, k)] * coords[i]).sum()).collect();
        Ok(AlgebraElement::from_sa_coords(&alg, &image)?.block(0).clone())
    })
}

/// Rank-2 projection onto the span of two equivalent pure states.
pub fn corner_projection(a: &PureState, b: &PureState) -> Result<AlgebraElement> {
    if !equivalent(a, b)? {
        return Err(Error::InequivalentStates);
    }
    if tp_amplitude(a, b)? >= 1.0 - 1e-9 {
        return Err(Error::EqualRays);
    }
    let chart = chart_from_states(a, b)?;
    AlgebraElement::embed(a.algebra(), a.block(), projector_onto(&chart.basis, a.psi().len()))
}

/// Orthonormal basis of the range of a corner projection, fixing how the
/// corner is identified with `M_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerChart {
    pub block: usize,
    pub basis: [Vec<C64>; 2],
}

impl CornerChart {
    /// `V m V*` with `V = [v1 v2]`.
    pub fn lift(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let v = ComplexMatrix::from_columns(&self.basis);
        &(&v * m) * &v.adjoint()
    }

    /// `V* a V`.
    pub fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = ComplexMatrix::from_columns(&self.basis);
        &(&v.adjoint() * a) * &v
    }

    /// Same corner, second basis vector multiplied by `z`.
    pub fn with_second_phase(&self, z: C64) -> Self {
        Self { block: self.block, basis: [self.basis[0].clone(), self.basis[1].iter().map(|w| w * z).collect()] }
    }
}

/// Chart of a rank-2 projection inside `block`, from its range.
pub fn corner_chart(f: &AlgebraElement, block: usize) -> Result<CornerChart> {
    f.algebra().check_block(block)?;
    let m = f.block(block);
    let basis = m.range_basis();
    let others = f.blocks().iter().enumerate().any(|(k, b)| k != block && b.max_abs() > 1e-10);
    if basis.len() != 2 || others || !f.is_projection() {
        let rank = f.blocks().iter().map(ComplexMatrix::rank).sum();
        return Err(Error::NotRank2 { rank });
    }
    Ok(CornerChart { block, basis: [basis[0].clone(), basis[1].clone()] })
}

/// Chart whose first vector is `a` and whose second is the normalized part
/// of `b` orthogonal to `a`.
pub fn chart_from_states(a: &PureState, b: &PureState) -> Result<CornerChart> {
    if !equivalent(a, b)? {
        return Err(Error::InequivalentStates);
    }
    let psi = a.psi().to_vec();
    let overlap = inner(&psi, b.psi());
    let rest: Vec<C64> = b.psi().iter().zip(&psi).map(|(w, p)| w - overlap * p).collect();
    let norm = vec_norm(&rest);
    if norm < 1e-9 {
        return Err(Error::EqualRays);
    }
    Ok(CornerChart { block: a.block(), basis: [psi, rest.into_iter().map(|w| w / norm).collect()] })
}

/// One corner cross-check of [`orientation_of`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerCheck {
    pub block: usize,
    pub det: f64,
    /// Orthogonality defect of the induced rotation.
    pub residual: f64,
    /// Determinant after changing the phase of the second chart vector.
    pub det_alternate_chart: f64,
    pub consistent: bool,
}

/// Rotation induced on the corner spanned by `a`, `b` by the dual action of
/// `j`, using `chart` on the source and the chart of the image states on the
/// target.
pub fn corner_rotation(j: &JordanSymmetry, chart: &CornerChart, a: &PureState, b: &PureState) -> Result<Rotation3> {
    let view = KadisonView::new(j);
    let alg = j.algebra().clone();
    let push = |psi: &PureState| -> Result<State> { kadison_apply(&view, &psi.to_state()) };
    let image_pure = |s: &State| -> Result<PureState> {
        let (block, rho) = s
            .rho()
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.trace().re.total_cmp(&y.1.trace().re))
            .expect("at least one block");
        let eig = rho.hermitian_eig()?;
        PureState::normalized(alg.clone(), block, eig.vectors.column(rho.rows() - 1))
    };
    let (ia, ib) = (image_pure(&push(a)?)?, image_pure(&push(b)?)?);
    let target = chart_from_states(&ia, &ib)?;
    rotation_of_density_map(|rho2| {
        let full = AlgebraElement::embed(&alg, chart.block, chart.lift(rho2))?;
        let state = State::new(alg.clone(), full.blocks().to_vec())?;
        let image = kadison_apply(&view, &state)?;
        Ok(target.compress(&image.rho()[target.block]).hermitian_part())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Orientation {
    Preserving,
    Reversing,
    Mixed,
    Trivial,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Preserving => "PRESERVING",
            Orientation::Reversing => "REVERSING",
            Orientation::Mixed => "MIXED",
            Orientation::Trivial => "TRIVIAL",
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrientationReport {
    pub verdict: Orientation,
    pub block_labels: Vec<BlockLabel>,
    pub corner_checks: Vec<CornerCheck>,
    pub consistent: bool,
}

/// Verdict from the per-block labels; `None` when no block has dimension 2 or
/// more.
pub fn verdict_from_labels(alg: &BlockAlgebra, labels: &[BlockLabel]) -> Orientation {
    let relevant: Vec<BlockLabel> = labels.iter().zip(alg.dims()).filter(|(_, &n)| n >= 2).map(|(l, _)| *l).collect();
    if relevant.is_empty() {
        Orientation::Trivial
    } else if relevant.iter().all(|&l| l == BlockLabel::Hom) {
        Orientation::Preserving
    } else if relevant.iter().all(|&l| l == BlockLabel::Anti) {
        Orientation::Reversing
    } else {
        Orientation::Mixed
    }
}

/// Classifies `j` from its Thomsen labels and cross-checks each block of
/// dimension at least 2 on the corner spanned by `e_0` and `(e_0 + e_1)/sqrt2`.
pub fn orientation_of(j: &JordanSymmetry) -> Result<OrientationReport> {
    let alg = j.algebra();
    let dec = thomsen_decompose(j)?;
    let verdict = verdict_from_labels(alg, &dec.block_labels);
    let mut corner_checks = vec![];
    for (i, &label) in dec.block_labels.iter().enumerate() {
        let n = alg.dim(i);
        if n < 2 {
            continue;
        }
        let a = PureState::basis(alg, i, 0)?;
        let mut psi = vec![C64::default(); n];
        psi[0] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi[1] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let b = PureState::new(alg.clone(), i, psi)?;
        let chart = chart_from_states(&a, &b)?;
        let r = corner_rotation(j, &chart, &a, &b)?;
        let alt = corner_rotation(j, &chart.with_second_phase(c64(0.0, 1.0)), &a, &b)?;
        let expected = match label {
            BlockLabel::Hom => 1.0,
            BlockLabel::Anti => -1.0,
            BlockLabel::Both => f64::NAN,
        };
        let det = r.det();
        let det_alternate_chart = alt.det();
        corner_checks.push(CornerCheck {
            block: i,
            det,
            residual: r.orthogonality_defect(),
            det_alternate_chart,
            consistent: (det - expected).abs() < ROTATION_TOL && det.signum() == det_alternate_chart.signum(),
        });
    }
    let consistent = corner_checks.iter().all(|c| c.consistent);
    Ok(OrientationReport { verdict, block_labels: dec.block_labels, corner_checks, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    #[test]
    fn density_examples() {
        let up = bloch_to_density(v(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(up, ComplexMatrix::diag(&[1.0, 0.0]));
        assert_eq!(bloch_to_density(v(0.0, 0.0, 0.0)).unwrap(), ComplexMatrix::diag(&[0.5, 0.5]));
        assert_eq!(bloch_to_density(v(1.0, 0.0, 0.0)).unwrap(), ComplexMatrix::from_real(2, 2, &[0.5; 4]));
        assert!(matches!(BlochVector::new(1.0, 1.0, 0.0), Err(Error::OutOfBall { .. })));
        assert_eq!(density_to_bloch(&up).unwrap(), v(0.0, 0.0, 1.0));
        assert!(density_to_bloch(&ComplexMatrix::diag(&[2.0, -1.0])).is_err());
    }

    #[test]
    fn sphere_examples() {
        assert!(sphere_tp(v(0.0, 0.0, 1.0), v(0.0, 0.0, -1.0)).unwrap().abs() < 1e-15);
        assert!((sphere_tp(v(0.0, 0.0, 1.0), v(1.0, 0.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(sphere_tp(v(0.0, 0.0, 0.5), v(0.0, 0.0, 1.0)), Err(Error::NotOnSphere { .. })));
    }

    #[test]
    fn rotation_examples() {
        let a = BlockAlgebra::new(vec![2]).unwrap();
        assert!(induced_rotation(&JordanMap::identity(&a)).unwrap().max_distance(&Rotation3::identity()) < 1e-14);
        let t = induced_rotation(&JordanMap::transpose_map(&a)).unwrap();
        let flip = Rotation3 { m: [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]] };
        assert!(t.max_distance(&flip) < 1e-14);

        // a -> u a u* with u = exp(i theta sz / 2) rotates densities by theta about z
        let theta: f64 = 0.7;
        let u = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c64(0.0, theta / 2.0).exp(), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -theta / 2.0).exp()],
        )
        .unwrap();
        let j = JordanMap::from_sa_fn(&a, |x| x.map_blocks(|b| &(&u * b) * &u.adjoint()));
        let r = induced_rotation(&j).unwrap();
        let (c, s) = (theta.cos(), theta.sin());
        let expect = Rotation3 { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] };
        assert!(r.max_distance(&expect) < 1e-12, "{r:?}");
    }

    #[test]
    fn corner_examples() {
        let a = BlockAlgebra::new(vec![3]).unwrap();
        let e0 = PureState::basis(&a, 0, 0).unwrap();
        let e1 = PureState::basis(&a, 0, 1).unwrap();
        let f = corner_projection(&e0, &e1).unwrap();
        assert!((f.block(0) - &ComplexMatrix::diag(&[1.0, 1.0, 0.0])).max_abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(a.clone(), 0, vec![c64(s, 0.0), c64(s, 0.0), c64(0.0, 0.0)]).unwrap();
        let g = corner_projection(&e0, &plus).unwrap();
        assert!(g.distance(&f).unwrap() < 1e-12);
        assert_eq!(corner_projection(&e0, &e0), Err(Error::EqualRays));
        let chart = corner_chart(&f, 0).unwrap();
        assert_eq!(chart.basis.len(), 2);
        let rank1 = AlgebraElement::embed(&a, 0, ComplexMatrix::diag(&[1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(corner_chart(&rank1, 0), Err(Error::NotRank2 { rank: 1 })));

        let b = BlockAlgebra::new(vec![1, 1]).unwrap();
        let x = PureState::basis(&b, 0, 0).unwrap();
        let y = PureState::basis(&b, 1, 0).unwrap();
        assert_eq!(corner_projection(&x, &y), Err(Error::InequivalentStates));
    }

    #[test]
    fn orientation_examples() {
        let a = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mixed = JordanMap::from_sa_fn(&a, |x| {
            AlgebraElement::new(a.clone(), vec![x.block(0).clone(), x.block(1).transpose()]).unwrap()
        });
        let report = orientation_of(&JordanSymmetry::try_new(mixed).unwrap()).unwrap();
        assert_eq!(report.verdict, Orientation::Mixed);
        assert!(report.consistent);
        assert!((report.corner_checks[1].det + 1.0).abs() < 1e-9);

        let c = BlockAlgebra::new(vec![1, 1]).unwrap();
        let trivial = orientation_of(&JordanSymmetry::identity(&c)).unwrap();
        assert_eq!(trivial.verdict, Orientation::Trivial);
        assert!(trivial.corner_checks.is_empty());
        assert_eq!(serde_json::to_value(trivial.verdict).unwrap(), "TRIVIAL");
    }
}
