// SPDX-License-Identifier: Apache-2.0

//! Finite-dimensional C*-algebras presented as direct sums of full matrix
//! blocks `M_n1 + ... + M_nk`, acting on `C^n1 + ... + C^nk` with multiplicity
//! one. Central projections are exactly sums of block identities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Block dimensions of `M_n1 + ... + M_nk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct BlockAlgebra {
    dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    dims: Vec<usize>,
}

impl TryFrom<AlgebraRepr> for BlockAlgebra {
    type Error = Error;
    fn try_from(r: AlgebraRepr) -> Result<Self> {
        BlockAlgebra::new(r.dims)
    }
}

impl From<BlockAlgebra> for AlgebraRepr {
    fn from(a: BlockAlgebra) -> Self {
        AlgebraRepr { dims: a.dims }
    }
}

impl BlockAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidAlgebra("at least one block is required".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidAlgebra("block dimensions must be positive".into()));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, block: usize) -> usize {
        self.dims[block]
    }

    /// `N = sum n_i`, the dimension of the Hilbert space the algebra acts on.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d = sum n_i^2`, the real dimension of the self-adjoint part.
    pub fn sa_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// Row/column offset of each block inside the `N x N` representation.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &n| {
                let off = *acc;
                *acc += n;
                Some(off)
            })
            .collect()
    }

    /// Offset of each block's coordinates in [`hermitian_basis`] order.
    pub fn coord_offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &n| {
                let off = *acc;
                *acc += n * n;
                Some(off)
            })
            .collect()
    }

    /// Block that owns hermitian-basis coordinate `k`.
    pub fn block_of_coord(&self, k: usize) -> usize {
        let mut acc = 0;
        for (i, n) in self.dims.iter().enumerate() {
            acc += n * n;
            if k < acc {
                return i;
            }
        }
        panic!("coordinate {k} out of range");
    }

    pub fn check_block(&self, block: usize) -> Result<()> {
        if block < self.num_blocks() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: block, len: self.num_blocks() })
        }
    }
}

/// An element of a [`BlockAlgebra`]: one square matrix per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct AlgebraElement {
    algebra: BlockAlgebra,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    algebra: BlockAlgebra,
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<ElementRepr> for AlgebraElement {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        AlgebraElement::new(r.algebra, r.blocks)
    }
}

impl From<AlgebraElement> for ElementRepr {
    fn from(a: AlgebraElement) -> Self {
        ElementRepr { algebra: a.algebra, blocks: a.blocks }
    }
}

impl AlgebraElement {
    pub fn new(algebra: BlockAlgebra, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "{} blocks for an algebra with {}",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (b, &n) in blocks.iter().zip(algebra.dims()) {
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block of size {}x{} where {n}x{n} expected",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { algebra, blocks })
    }

    pub fn zero(algebra: &BlockAlgebra) -> Self {
        let blocks = algebra.dims().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Self { algebra: algebra.clone(), blocks }
    }

    /// The unit `1_A`.
    pub fn unit(algebra: &BlockAlgebra) -> Self {
        let blocks = algebra.dims().iter().map(|&n| ComplexMatrix::identity(n)).collect();
        Self { algebra: algebra.clone(), blocks }
    }

    /// The element equal to `m` in `block` and zero elsewhere.
    pub fn embed(algebra: &BlockAlgebra, block: usize, m: ComplexMatrix) -> Result<Self> {
        algebra.check_block(block)?;
        let mut el = Self::zero(algebra);
        let n = algebra.dim(block);
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!("block {block} is {n}x{n}")));
        }
        el.blocks[block] = m;
        Ok(el)
    }

    /// Identity of one block, the minimal central projections.
    pub fn block_identity(algebra: &BlockAlgebra, block: usize) -> Result<Self> {
        algebra.check_block(block)?;
        Self::embed(algebra, block, ComplexMatrix::identity(algebra.dim(block)))
    }

    /// Sum of the block identities selected by `mask`.
    pub fn central_projection(algebra: &BlockAlgebra, mask: &[bool]) -> Self {
        let blocks = algebra
            .dims()
            .iter()
            .zip(mask)
            .map(|(&n, &on)| if on { ComplexMatrix::identity(n) } else { ComplexMatrix::zeros(n, n) })
            .collect();
        Self { algebra: algebra.clone(), blocks }
    }

    /// Restriction of a block-diagonal `N x N` matrix. Off-diagonal blocks are
    /// dropped.
    pub fn from_full(algebra: &BlockAlgebra, m: &ComplexMatrix) -> Result<Self> {
        let n = algebra.total_dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n}")));
        }
        let blocks = algebra
            .dims()
            .iter()
            .zip(algebra.offsets())
            .map(|(&k, off)| ComplexMatrix::from_fn(k, k, |i, j| m.get(off + i, off + j)))
            .collect();
        Ok(Self { algebra: algebra.clone(), blocks })
    }

    /// Block-diagonal `N x N` matrix of this element.
    pub fn to_full(&self) -> ComplexMatrix {
        let n = self.algebra.total_dim();
        let offsets = self.algebra.offsets();
        let mut entries = vec![C64::default(); n * n];
        for (b, off) in self.blocks.iter().zip(offsets) {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    entries[(off + i) * n + off + j] = b.get(i, j);
                }
            }
        }
        ComplexMatrix::from_row_major(n, n, entries).expect("finite entries")
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ComplexMatrix {
        &self.blocks[i]
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        self.same_algebra(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(Self { algebra: self.algebra.clone(), blocks })
    }

    pub fn map_blocks(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self { algebra: self.algebra.clone(), blocks: self.blocks.iter().map(f).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map_blocks(|b| b.scale(z))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(ComplexMatrix::adjoint)
    }

    /// Blockwise transpose, an anti-automorphism.
    pub fn transpose(&self) -> Self {
        self.map_blocks(ComplexMatrix::transpose)
    }

    /// Blockwise entrywise conjugation.
    pub fn conj(&self) -> Self {
        self.map_blocks(ComplexMatrix::conj)
    }

    /// `a o b = (ab + ba) / 2`
    pub fn jordan_product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| (&(a * b) + &(b * a)).scale_real(0.5))
    }

    /// `ab - ba`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| &(a * b) - &(b * a))
    }

    /// Frobenius norm over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.frobenius_norm().powi(2)).sum::<f64>().sqrt()
    }

    /// Largest block operator norm, i.e. the C*-norm.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::operator_norm).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::max_abs).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::hermitian_deviation).fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Smallest eigenvalue over all blocks, `None` if not self-adjoint.
    pub fn min_eigenvalue(&self) -> Option<f64> {
        let mut lo = f64::INFINITY;
        for b in &self.blocks {
            let eig = b.hermitian_eig().ok()?;
            lo = lo.min(eig.values[0]);
        }
        Some(lo)
    }

    /// Largest eigenvalue over all blocks, `None` if not self-adjoint.
    pub fn max_eigenvalue(&self) -> Option<f64> {
        let mut hi = f64::NEG_INFINITY;
        for b in &self.blocks {
            let eig = b.hermitian_eig().ok()?;
            hi = hi.max(*eig.values.last().expect("non-empty block"));
        }
        Some(hi)
    }

    /// Self-adjoint within 1e-10 with every eigenvalue at least -1e-10.
    pub fn is_positive(&self) -> bool {
        self.is_self_adjoint(1e-10) && self.min_eigenvalue().is_some_and(|v| v >= -1e-10)
    }

    /// `a^2 = a = a*` within 1e-9 in every block.
    pub fn is_projection(&self) -> bool {
        self.blocks.iter().all(|b| {
            let sq = b * b;
            (&sq - b).frobenius_norm() < 1e-9 && (b - &b.adjoint()).frobenius_norm() < 1e-9
        })
    }

    /// `sum_i Tr(a_i b_i)`
    pub fn trace_pairing(&self, other: &Self) -> Result<C64> {
        self.same_algebra(other)?;
        Ok(self.blocks.iter().zip(&other.blocks).map(|(a, b)| (a * b).trace()).sum())
    }

    /// Splits `a = x + iy` with `x`, `y` self-adjoint.
    pub fn split_hermitian(&self) -> (Self, Self) {
        let x = self.map_blocks(ComplexMatrix::hermitian_part);
        let y = self.map_blocks(|b| (b - &b.adjoint()).scale(c64(0.0, -0.5)));
        (x, y)
    }

    /// Coordinates of the hermitian part in [`hermitian_basis`] order.
    ///
    /// For self-adjoint input these are the exact coordinates; in general the
    /// result is the coordinate vector of `(a + a*) / 2`.
    pub fn sa_coords(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.algebra.sa_dim());
        for b in &self.blocks {
            let n = b.rows();
            for j in 0..n {
                out.push(b.get(j, j).re);
            }
            // Tr(e x) for e = (E_jk + E_kj)/sqrt2 and e = (-i E_jk + i E_kj)/sqrt2
            for j in 0..n {
                for k in j + 1..n {
                    out.push(SQRT_HALF * (b.get(k, j) + b.get(j, k)).re);
                }
            }
            for j in 0..n {
                for k in j + 1..n {
                    out.push(SQRT_HALF * (c64(0.0, -1.0) * b.get(k, j) + c64(0.0, 1.0) * b.get(j, k)).re);
                }
            }
        }
        out
    }

    /// Self-adjoint element with the given [`hermitian_basis`] coordinates.
    pub fn from_sa_coords(algebra: &BlockAlgebra, coords: &[f64]) -> Result<Self> {
        if coords.len() != algebra.sa_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for sa dimension {}",
                coords.len(),
                algebra.sa_dim()
            )));
        }
        let mut blocks = Vec::with_capacity(algebra.num_blocks());
        let mut it = coords.iter().copied();
        for &n in algebra.dims() {
            let mut m = vec![C64::default(); n * n];
            for j in 0..n {
                m[j * n + j] = c64(it.next().expect("length checked"), 0.0);
            }
            for j in 0..n {
                for k in j + 1..n {
                    let s = SQRT_HALF * it.next().expect("length checked");
                    m[j * n + k] += c64(s, 0.0);
                    m[k * n + j] += c64(s, 0.0);
                }
            }
            for j in 0..n {
                for k in j + 1..n {
                    let s = SQRT_HALF * it.next().expect("length checked");
                    m[j * n + k] += c64(0.0, -s);
                    m[k * n + j] += c64(0.0, s);
                }
            }
            blocks.push(ComplexMatrix::from_row_major(n, n, m)?);
        }
        Ok(Self { algebra: algebra.clone(), blocks })
    }
}

/// Orthonormal basis of the self-adjoint part under `<a, b> = sum Tr(a_i b_i)`.
///
/// Order, per block and blocks in order: diagonal units `E_jj`, then
/// `(E_jk + E_kj)/sqrt2` for `j < k`, then `(-i E_jk + i E_kj)/sqrt2` for
/// `j < k`, pairs in lexicographic order. Jordan-map matrices are stored in
/// these coordinates, so the order is part of the file format.
pub fn hermitian_basis(algebra: &BlockAlgebra) -> Vec<AlgebraElement> {
    let d = algebra.sa_dim();
    (0..d)
        .map(|k| {
            let mut coords = vec![0.0; d];
            coords[k] = 1.0;
            AlgebraElement::from_sa_coords(algebra, &coords).expect("dimension matches")
        })
        .collect()
}
