// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and the handful of spectral primitives the rest of
//! the crate is built on.
//!
//! [`ComplexMatrix`] is an immutable value wrapping a `nalgebra` matrix. Every
//! operation returns a fresh matrix. Rank decisions (kernel, range, carrier)
//! share one relative singular-value cutoff, [`RANK_CUTOFF`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Maximum entry deviation of `m - m*` tolerated by [`ComplexMatrix::hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Hermitian inner product `<x, y> = sum conj(x_k) y_k`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Real matrix from row-major entries. Panics on a length mismatch, so it
    /// is meant for literals.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        let entries = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::from_row_major(rows, cols, entries).expect("literal matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { C64::default() })
    }

    /// `|x><y|`
    pub fn outer(x: &[C64], y: &[C64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn inner_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(c64(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - self*`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `(m + m*) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c64(0.5, 0.0))
    }

    /// Eigendecomposition of a hermitian matrix, eigenvalues ascending.
    pub fn hermitian_eig(&self) -> Result<HermitianEig> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let n = self.rows();
        if n == 0 {
            return Ok(HermitianEig { values: vec![], vectors: Self::zeros(0, 0) });
        }
        let eig = nalgebra::SymmetricEigen::new(self.hermitian_part().0);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(HermitianEig { values, vectors: Self(vectors) })
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        svd(&self.0).values
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Orthogonal projection onto the column space.
    pub fn range_projection(&self) -> Self {
        let basis = self.range_basis();
        projector_onto(&basis, self.rows())
    }

    /// Orthonormal basis of the column space (left singular vectors above the
    /// rank cutoff), ordered by decreasing singular value.
    pub fn range_basis(&self) -> Vec<Vec<C64>> {
        let svd = svd(&self.0);
        let kept = svd.above(RANK_CUTOFF * svd.values.first().copied().unwrap_or(0.0));
        svd.u.into_iter().take(kept).collect()
    }

    pub fn rank(&self) -> usize {
        self.range_basis().len()
    }

    /// Orthogonal projection onto the intersection of the kernels of `ms`.
    /// The empty family yields the identity.
    pub fn kernel_projection(ms: &[ComplexMatrix], n: usize) -> Result<Self> {
        if let Some(bad) = ms.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        if ms.is_empty() || n == 0 {
            return Ok(Self::identity(n));
        }
        let mut stacked = DMatrix::<C64>::zeros(ms.len() * n, n);
        for (k, m) in ms.iter().enumerate() {
            stacked.view_mut((k * n, 0), (n, n)).copy_from(&m.0);
        }
        let svd = svd(&stacked);
        let kept = svd.above(RANK_CUTOFF * svd.values.first().copied().unwrap_or(0.0));
        let row_space = projector_onto(&svd.v[..kept], n);
        let kernel = &Self::identity(n) - &row_space;
        Ok(kernel)
    }
}

/// Thin singular value decomposition: `values` in descending order, with
/// matching left and right singular vectors.
pub(crate) struct Svd {
    pub values: Vec<f64>,
    pub u: Vec<Vec<C64>>,
    pub v: Vec<Vec<C64>>,
}

impl Svd {
    /// Number of singular values strictly above `cutoff`.
    pub fn above(&self, cutoff: f64) -> usize {
        self.values.iter().take_while(|&&s| s > cutoff && s > 0.0).count()
    }
}

/// SVD through the hermitian eigenproblem of `[[0, m], [m*, 0]]`, after a QR
/// reduction to a square factor. The `nalgebra` complex SVD loses the left
/// singular vectors of some rank-deficient inputs.
pub(crate) fn svd(m: &DMatrix<C64>) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd { values: vec![], u: vec![], v: vec![] };
    }
    if r < c {
        let Svd { values, u, v } = svd(&m.adjoint());
        return Svd { values, u: v, v: u };
    }
    if r > c {
        let qr = m.clone().qr();
        let q = qr.q();
        let inner = svd(&qr.r());
        let u = inner
            .u
            .iter()
            .map(|x| (&q * DMatrix::from_column_slice(c, 1, x)).iter().copied().collect())
            .collect();
        return Svd { u, ..inner };
    }
    let n = r;
    let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
    h.view_mut((0, n), (n, n)).copy_from(m);
    h.view_mut((n, 0), (n, n)).copy_from(&m.adjoint());
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let unit = |x: Vec<C64>| {
        let norm = vec_norm(&x);
        if norm > 0.0 {
            x.into_iter().map(|z| z / norm).collect()
        } else {
            x
        }
    };
    let (mut values, mut u, mut v) = (vec![], vec![], vec![]);
    for &k in order.iter().take(n) {
        let col = eig.eigenvectors.column(k);
        values.push(eig.eigenvalues[k].max(0.0));
        u.push(unit(col.rows(0, n).iter().copied().collect()));
        v.push(unit(col.rows(n, n).iter().copied().collect()));
    }
    Svd { values, u, v }
}

/// `sum_k |v_k><v_k|` for an orthonormal family.
pub fn projector_onto(basis: &[Vec<C64>], n: usize) -> ComplexMatrix {
    let mut p = DMatrix::<C64>::zeros(n, n);
    for v in basis {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    ComplexMatrix(p)
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}x{}[", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{}{:.6}{:+.6}i", if j > 0 { ", " } else { "" }, z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.row_major();
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.re.len() != repr.im.len() {
            return Err(D::Error::custom("re and im arrays differ in length"));
        }
        let entries = repr.re.iter().zip(&repr.im).map(|(&re, &im)| c64(re, im)).collect();
        ComplexMatrix::from_row_major(repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn adjoint_of_nilpotent() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.adjoint(), ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]));
        let s = ComplexMatrix::from_row_major(1, 1, vec![c64(0.0, 1.0)]).unwrap();
        assert_eq!(s.adjoint().get(0, 0), c64(0.0, -1.0));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, 2, vec![C64::default(); 3]),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(
            ComplexMatrix::from_row_major(1, 1, vec![c64(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn eig_of_diagonal_and_pauli() {
        let e = ComplexMatrix::diag(&[3.0, 1.0]).hermitian_eig().unwrap();
        assert_eq!(e.values.len(), 2);
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-12);

        // characteristic polynomial x^2 - 1
        let e = pauli_x().hermitian_eig().unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-12);

        let e = ComplexMatrix::identity(4).hermitian_eig().unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(m.hermitian_eig(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_reconstructs_complex_hermitian() {
        let m = ComplexMatrix::from_row_major(
            3,
            3,
            vec![
                c64(2.0, 0.0),
                c64(0.5, -1.0),
                c64(0.0, 0.3),
                c64(0.5, 1.0),
                c64(-1.0, 0.0),
                c64(0.2, 0.0),
                c64(0.0, -0.3),
                c64(0.2, 0.0),
                c64(0.7, 0.0),
            ],
        )
        .unwrap();
        let e = m.hermitian_eig().unwrap();
        for (k, &lambda) in e.values.iter().enumerate() {
            let v = e.vectors.column(k);
            let mv = m.mul_vec(&v);
            for i in 0..3 {
                assert!((mv[i] - v[i] * lambda).norm() < 1e-9);
            }
        }
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!((&gram - &ComplexMatrix::identity(3)).max_abs() < 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_recomposes_rank_deficient_inputs() {
        for (t, (r, c, rank)) in [(16, 16, 1), (16, 16, 2), (8, 8, 2), (5, 9, 2), (9, 5, 3), (7, 7, 7)].into_iter().enumerate() {
            for k in 0..40 {
                let mut rng = crate::random::trial_rng(3, t as u64, k);
                let g = DMatrix::from_fn(r, rank, |_, _| crate::random::gaussian_c64(&mut rng));
                let h = DMatrix::from_fn(rank, c, |_, _| crate::random::gaussian_c64(&mut rng));
                let m = &g * &h;
                let d = svd(&m);
                let kept = d.above(RANK_CUTOFF * d.values[0]);
                assert_eq!(kept, rank);
                let mut rec = DMatrix::<C64>::zeros(r, c);
                for j in 0..kept {
                    for a in 0..r {
                        for b in 0..c {
                            rec[(a, b)] += d.u[j][a] * d.v[j][b].conj() * d.values[j];
                        }
                    }
                    for i in 0..kept {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert_abs_diff_eq!(inner(&d.u[i], &d.u[j]).norm(), want, epsilon = 1e-10);
                    }
                }
                assert!((rec - &m).norm() < 1e-10 * m.norm());
            }
        }
    }

    #[test]
    fn kernel_projection_cases() {
        let q = ComplexMatrix::kernel_projection(&[], 3).unwrap();
        assert_eq!(q, ComplexMatrix::identity(3));

        let q = ComplexMatrix::kernel_projection(&[ComplexMatrix::diag(&[1.0, 0.0])], 2).unwrap();
        assert!((&q - &ComplexMatrix::diag(&[0.0, 1.0])).max_abs() < 1e-12);

        let q = ComplexMatrix::kernel_projection(
            &[ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0])],
            2,
        )
        .unwrap();
        assert!(q.max_abs() < 1e-12);

        let err = ComplexMatrix::kernel_projection(&[ComplexMatrix::identity(3)], 2);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn range_projection_cases() {
        assert!(ComplexMatrix::zeros(3, 3).range_projection().max_abs() == 0.0);
        let inv = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert!((&inv.range_projection() - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
        let p = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).range_projection();
        assert!((&p - &ComplexMatrix::diag(&[1.0, 0.0])).max_abs() < 1e-12);
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!(ComplexMatrix::diag(&[1.0, -1.0]).trace_norm(), 2.0, epsilon = 1e-12);
        let psi = [c64(0.6, 0.0), c64(0.0, 0.8)];
        assert_abs_diff_eq!(ComplexMatrix::outer(&psi, &psi).trace_norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ComplexMatrix::identity(5).operator_norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ComplexMatrix::diag(&[2.0, 1.0]).operator_norm(), 2.0, epsilon = 1e-12);
        assert_eq!(ComplexMatrix::zeros(2, 2).trace_norm(), 0.0);
    }

    #[test]
    fn trace_norm_of_pure_state_difference() {
        // |<psi,phi>|^2 = cos^2(0.4); the difference has eigenvalues +-sin(0.4)
        let t: f64 = 0.4;
        let psi = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        let phi = [c64(t.cos(), 0.0), c64(0.0, t.sin()), c64(0.0, 0.0)];
        let d = &ComplexMatrix::outer(&psi, &psi) - &ComplexMatrix::outer(&phi, &phi);
        let tau = inner(&psi, &phi).norm_sqr();
        assert_abs_diff_eq!(d.trace_norm(), 2.0 * (1.0 - tau).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn json_round_trip_and_layout() {
        let m = ComplexMatrix::from_row_major(1, 2, vec![c64(1.0, 2.0), c64(3.0, -4.0)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"re":[1.0,3.0],"im":[2.0,-4.0]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"re":[1],"im":[0]}"#).is_err());
    }
}
