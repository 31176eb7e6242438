// SPDX-License-Identifier: Apache-2.0

//! Jordan, Kadison and Wigner symmetries of a block algebra.
//!
//! A [`JordanMap`] is any real-linear map of the self-adjoint part, stored as a
//! `d x d` matrix in [`hermitian_basis`](crate::algebra::hermitian_basis)
//! coordinates and applied to arbitrary elements through its complexification
//! `J(x + iy) = J(x) + iJ(y)`. A map that passes [`is_jordan_symmetry`] can be
//! promoted to a [`JordanSymmetry`]; operations that need the Jordan property
//! take that type. Kadison symmetries act on states by `omega -> omega o J` and
//! Wigner symmetries are their restrictions to pure states.

pub mod canonical;
pub mod herstein;
pub mod wigner;

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_basis, AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::c64;
use crate::random;
use crate::states::State;

pub use canonical::{BlockOperator, CanonicalSymmetry};
pub use herstein::{check_herstein_identities, herstein_defects, HersteinReport, IdentityCheck};
pub use wigner::{
    is_wigner, jordan_from_wigner, wigner_from_jordan, FnOracle, JordanOracle, Reconstruction,
    ReconstructOptions, WignerOracle, WignerReport,
};

/// Residual bound for `||J(a o b) - J(a) o J(b)||`.
pub const JORDAN_TOL: f64 = 1e-8;
/// Smallest admissible ratio of extreme singular values of a Jordan matrix.
pub const INVERTIBILITY_TOL: f64 = 1e-10;
/// Random pair budget used when a caller does not pick one.
pub const DEFAULT_TRIALS: usize = 200;

const STREAM_JORDAN: u64 = 0x4a4f_5244;

/// Real-linear map of the self-adjoint part in hermitian-basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanMap {
    algebra: BlockAlgebra,
    matrix: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct JordanRepr {
    algebra: BlockAlgebra,
    matrix: Vec<Vec<f64>>,
}

impl Serialize for JordanMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.matrix.nrows();
        let rows = (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)]).collect()).collect();
        JordanRepr { algebra: self.algebra.clone(), matrix: rows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = JordanRepr::deserialize(d)?;
        JordanMap::from_rows(repr.algebra, &repr.matrix).map_err(D::Error::custom)
    }
}

impl JordanMap {
    pub fn new(algebra: BlockAlgebra, matrix: DMatrix<f64>) -> Result<Self> {
        let d = algebra.sa_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Jordan matrix is {}x{}, algebra needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { algebra, matrix })
    }

    /// Row-major construction.
    pub fn from_rows(algebra: BlockAlgebra, rows: &[Vec<f64>]) -> Result<Self> {
        let d = algebra.sa_dim();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!("Jordan matrix must be {d}x{d}")));
        }
        Self::new(algebra, DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn identity(algebra: &BlockAlgebra) -> Self {
        let d = algebra.sa_dim();
        Self { algebra: algebra.clone(), matrix: DMatrix::identity(d, d) }
    }

    /// Matrix of the real-linear map `x -> f(x)` on self-adjoint elements;
    /// column `k` holds the coordinates of the hermitian part of `f(e_k)`.
    pub fn from_sa_fn(algebra: &BlockAlgebra, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Self {
        let d = algebra.sa_dim();
        let mut matrix = DMatrix::zeros(d, d);
        for (k, e) in hermitian_basis(algebra).iter().enumerate() {
            let image = f(e).sa_coords();
            for (i, v) in image.into_iter().enumerate() {
                matrix[(i, k)] = v;
            }
        }
        Self { algebra: algebra.clone(), matrix }
    }

    /// Blockwise transpose `a -> a^T`.
    pub fn transpose_map(algebra: &BlockAlgebra) -> Self {
        Self::from_sa_fn(algebra, AlgebraElement::transpose)
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply_coords(&self, coords: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(coords)).iter().copied().collect()
    }

    fn apply_sa(&self, x: &AlgebraElement) -> AlgebraElement {
        let image = self.apply_coords(&x.sa_coords());
        AlgebraElement::from_sa_coords(&self.algebra, &image).expect("dimension matches")
    }

    /// Complexification `J(x + iy) = J(x) + iJ(y)`.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let (x, y) = a.split_hermitian();
        self.apply_sa(&x).add(&self.apply_sa(&y).scale(c64(0.0, 1.0)))
    }

    /// `self o other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { algebra: self.algebra.clone(), matrix: &self.matrix * &other.matrix })
    }

    /// Ratio of smallest to largest singular value of the matrix.
    pub fn conditioning(&self) -> f64 {
        let s = self.matrix.clone().svd(false, false).singular_values;
        let hi = s.iter().copied().fold(0.0, f64::max);
        let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.conditioning() <= INVERTIBILITY_TOL {
            return Err(Error::NotJordan("matrix is singular".into()));
        }
        let inv = self.matrix.clone().try_inverse().ok_or_else(|| Error::NotJordan("matrix is singular".into()))?;
        Ok(Self { algebra: self.algebra.clone(), matrix: inv })
    }

    /// Max-entry distance between matrices.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok((&self.matrix - &other.matrix).iter().map(|x| x.abs()).fold(0.0, f64::max))
    }
}

/// Outcome of [`is_jordan_symmetry`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JordanReport {
    pub invertible: bool,
    pub conditioning: f64,
    /// Worst `||J(a o b) - J(a) o J(b)||` over all hermitian-basis pairs.
    pub basis_residual: f64,
    pub basis_witness: Option<(usize, usize)>,
    /// Worst residual over the random self-adjoint pairs.
    pub random_residual: f64,
    pub random_witness: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
}

/// Checks invertibility and `J(a o b) = J(a) o J(b)`: exhaustively on the
/// hermitian basis, which is sufficient by bilinearity, and on `trials`
/// random self-adjoint pairs.
pub fn is_jordan_symmetry(j: &JordanMap, trials: usize, seed: u64) -> JordanReport {
    let alg = &j.algebra;
    let conditioning = j.conditioning();
    let invertible = conditioning > INVERTIBILITY_TOL;

    let basis = hermitian_basis(alg);
    let images: Vec<AlgebraElement> = basis.iter().map(|e| j.apply_sa(e)).collect();
    let mut basis_residual: f64 = 0.0;
    let mut basis_witness = None;
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let lhs = j.apply_sa(&basis[a].jordan_product(&basis[b]).expect("same algebra"));
            let rhs = images[a].jordan_product(&images[b]).expect("same algebra");
            let r = lhs.distance(&rhs).expect("same algebra");
            if r > basis_residual {
                basis_residual = r;
                if r >= JORDAN_TOL {
                    basis_witness.get_or_insert((a, b));
                }
            }
        }
    }

    let mut random_residual: f64 = 0.0;
    let mut random_witness = None;
    for t in 0..trials {
        let mut rng = random::trial_rng(seed, STREAM_JORDAN, t as u64);
        let a = random::sa_element(&mut rng, alg);
        let b = random::sa_element(&mut rng, alg);
        let lhs = j.apply_sa(&a.jordan_product(&b).expect("same algebra"));
        let rhs = j.apply_sa(&a).jordan_product(&j.apply_sa(&b)).expect("same algebra");
        let r = lhs.distance(&rhs).expect("same algebra");
        if r > random_residual {
            random_residual = r;
            if r >= JORDAN_TOL {
                random_witness.get_or_insert(t);
            }
        }
    }

    let passed = invertible && basis_residual < JORDAN_TOL && random_residual < JORDAN_TOL;
    JordanReport {
        invertible,
        conditioning,
        basis_residual,
        basis_witness,
        random_residual,
        random_witness,
        trials,
        seed,
        passed,
    }
}

/// A [`JordanMap`] that passed [`is_jordan_symmetry`].
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSymmetry(JordanMap);

impl JordanSymmetry {
    pub fn validate(map: JordanMap, trials: usize, seed: u64) -> Result<Self> {
        let report = is_jordan_symmetry(&map, trials, seed);
        if report.passed {
            Ok(Self(map))
        } else {
            Err(Error::NotValidated(format!(
                "invertible={}, basis residual {:e}, random residual {:e}",
                report.invertible, report.basis_residual, report.random_residual
            )))
        }
    }

    /// Jordan map of a canonical form with unitary operators. Block
    /// permutations, unitary conjugations and transposes preserve the Jordan
    /// product, so only unitarity is checked.
    pub fn from_canonical(c: &CanonicalSymmetry) -> Result<Self> {
        let defect = c.unitarity_defect();
        if defect > INVERTIBILITY_TOL {
            return Err(Error::NotValidated(format!("operators have unitarity defect {defect:e}")));
        }
        Ok(Self(c.jordan_map()))
    }

    /// Validation with [`DEFAULT_TRIALS`] random pairs and seed 0.
    pub fn try_new(map: JordanMap) -> Result<Self> {
        Self::validate(map, DEFAULT_TRIALS, 0)
    }

    pub fn identity(algebra: &BlockAlgebra) -> Self {
        Self(JordanMap::identity(algebra))
    }

    pub fn map(&self) -> &JordanMap {
        &self.0
    }

    pub fn into_map(self) -> JordanMap {
        self.0
    }

    /// Composition of two symmetries is again one; no re-validation needed.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.compose(&other.0)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self(self.0.inverse()?))
    }
}

impl Deref for JordanSymmetry {
    type Target = JordanMap;
    fn deref(&self) -> &JordanMap {
        &self.0
    }
}

/// A Kadison symmetry, represented through its generating Jordan symmetry.
#[derive(Clone, Copy, Debug)]
pub struct KadisonView<'a> {
    pub jordan: &'a JordanSymmetry,
}

impl<'a> KadisonView<'a> {
    pub fn new(jordan: &'a JordanSymmetry) -> Self {
        Self { jordan }
    }

    pub fn apply(&self, omega: &State) -> Result<State> {
        kadison_apply(self, omega)
    }
}

/// `K(omega) = omega o J`: the density with `Tr(rho' a) = Tr(rho J(a))`,
/// obtained by the transposed Jordan matrix acting on the density coordinates.
pub fn kadison_apply(k: &KadisonView<'_>, omega: &State) -> Result<State> {
    let j = k.jordan.map();
    if omega.algebra() != j.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let s = DVector::from_vec(omega.coords());
    let image: Vec<f64> = (j.matrix().transpose() * s).iter().copied().collect();
    let rho = AlgebraElement::from_sa_coords(j.algebra(), &image)?;
    State::new(j.algebra().clone(), rho.blocks().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    fn alg(dims: &[usize]) -> BlockAlgebra {
        BlockAlgebra::new(dims.to_vec()).unwrap()
    }

    /// `a -> u* a u` on a single-block algebra.
    fn conjugation(a: &BlockAlgebra, u: &ComplexMatrix) -> JordanMap {
        JordanMap::from_sa_fn(a, |x| x.map_blocks(|b| &(&u.adjoint() * b) * u))
    }

    fn scaled_identity(a: &BlockAlgebra, k: usize) -> JordanMap {
        let mut m = DMatrix::identity(a.sa_dim(), a.sa_dim());
        m[(k, k)] = 2.0;
        JordanMap::new(a.clone(), m).unwrap()
    }

    #[test]
    fn identity_and_transpose_are_jordan() {
        for dims in [vec![2], vec![3, 1], vec![2, 2]] {
            let a = alg(&dims);
            assert!(is_jordan_symmetry(&JordanMap::identity(&a), 20, 1).passed);
            assert!(is_jordan_symmetry(&JordanMap::transpose_map(&a), 20, 1).passed);
        }
    }

    #[test]
    fn scaled_coordinate_is_not_jordan() {
        let a = alg(&[2]);
        let report = is_jordan_symmetry(&scaled_identity(&a, 0), 20, 1);
        assert!(!report.passed);
        assert!(report.invertible);
        assert!(report.basis_residual > 0.1);
        // E_11 o E_11 = E_11 maps to 2 E_11 but (2 E_11)^2 = 4 E_11
        assert_eq!(report.basis_witness, Some((0, 0)));
        assert!(JordanSymmetry::try_new(scaled_identity(&a, 0)).is_err());
    }

    #[test]
    fn singular_map_is_rejected() {
        let a = alg(&[2]);
        let zero = JordanMap::new(a.clone(), DMatrix::zeros(4, 4)).unwrap();
        let report = is_jordan_symmetry(&zero, 5, 0);
        assert!(!report.invertible && !report.passed);
    }

    #[test]
    fn apply_reproduces_conjugation() {
        let a = alg(&[2]);
        let u = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c64(0.6, 0.0), c64(0.0, 0.8), c64(0.0, 0.8), c64(0.6, 0.0)],
        )
        .unwrap();
        let j = conjugation(&a, &u);
        // complex, non-self-adjoint input
        let x = AlgebraElement::embed(&a, 0, ComplexMatrix::from_row_major(2, 2, vec![c64(1.0, 2.0), c64(0.0, -1.0), c64(3.0, 0.5), c64(-2.0, 0.0)]).unwrap()).unwrap();
        let direct = x.map_blocks(|b| &(&u.adjoint() * b) * &u);
        assert!(j.apply(&x).unwrap().distance(&direct).unwrap() < 1e-12);
        // commutes with the adjoint
        let lhs = j.apply(&x.adjoint()).unwrap();
        let rhs = j.apply(&x).unwrap().adjoint();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        let one = AlgebraElement::unit(&a);
        assert!(j.apply(&one).unwrap().distance(&one).unwrap() < 1e-12);
        assert!(JordanMap::identity(&a).apply(&x).unwrap().distance(&x).unwrap() < 1e-15);
    }

    #[test]
    fn kadison_of_conjugation_is_inverse_conjugation() {
        let a = alg(&[2]);
        let u = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c64(0.6, 0.0), c64(0.0, 0.8), c64(0.0, 0.8), c64(0.6, 0.0)],
        )
        .unwrap();
        let j = JordanSymmetry::try_new(conjugation(&a, &u)).unwrap();
        let rho = ComplexMatrix::from_row_major(2, 2, vec![c64(0.7, 0.0), c64(0.1, -0.2), c64(0.1, 0.2), c64(0.3, 0.0)])
            .unwrap();
        let omega = State::new(a.clone(), vec![rho.clone()]).unwrap();
        let out = kadison_apply(&KadisonView::new(&j), &omega).unwrap();
        let expect = &(&u * &rho) * &u.adjoint();
        assert!((&out.rho()[0] - &expect).max_abs() < 1e-12);

        let id = JordanSymmetry::identity(&a);
        let same = KadisonView::new(&id).apply(&omega).unwrap();
        assert!((&same.rho()[0] - &rho).max_abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let a = alg(&[1, 1]);
        let j = JordanMap::identity(&a);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"algebra":{"dims":[1,1]},"matrix":[[1.0,0.0],[0.0,1.0]]}"#);
        assert_eq!(serde_json::from_str::<JordanMap>(&s).unwrap(), j);
        assert!(serde_json::from_str::<JordanMap>(r#"{"algebra":{"dims":[2]},"matrix":[[1.0]]}"#).is_err());
    }
}
