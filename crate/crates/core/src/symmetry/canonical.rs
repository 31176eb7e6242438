// SPDX-License-Identifier: Apache-2.0

//! Canonical form of a symmetry: a block permutation plus one (anti-)unitary
//! operator per block.
//!
//! For block `i` with target `j = perm[i]` and operator `(u, flag)` the Jordan
//! map is `J(a)_i = u* a_j u` (flag false) or `J(a)_i = u* conj(a_j) u` (flag
//! true), and the Wigner map sends a pure state `(i, psi)` to `(j, u psi)` or
//! `(j, conj(u psi))`. This is the serialized form the CLI uses to denote a
//! Wigner oracle.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::states::PureState;

use super::wigner::WignerOracle;
use super::JordanMap;

/// An operator `u` acting on one block, optionally followed by entrywise
/// complex conjugation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockOperator {
    pub u: ComplexMatrix,
    pub antiunitary: bool,
}

impl BlockOperator {
    /// `u* a u` or `u* conj(a) u`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let a = if self.antiunitary { a.conj() } else { a.clone() };
        &(&self.u.adjoint() * &a) * &self.u
    }

    /// `u psi` or `conj(u psi)`.
    pub fn act(&self, psi: &[crate::matrix::C64]) -> Vec<crate::matrix::C64> {
        let v = self.u.mul_vec(psi);
        if self.antiunitary {
            v.into_iter().map(|z| z.conj()).collect()
        } else {
            v
        }
    }

    /// `||u*u - 1||` (max entry).
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.u.cols();
        (&(&self.u.adjoint() * &self.u) - &ComplexMatrix::identity(n)).max_abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CanonicalRepr")]
pub struct CanonicalSymmetry {
    algebra: BlockAlgebra,
    perm: Vec<usize>,
    blocks: Vec<BlockOperator>,
}

#[derive(Deserialize)]
struct CanonicalRepr {
    algebra: BlockAlgebra,
    perm: Vec<usize>,
    blocks: Vec<BlockOperator>,
}

impl TryFrom<CanonicalRepr> for CanonicalSymmetry {
    type Error = Error;
    fn try_from(r: CanonicalRepr) -> Result<Self> {
        CanonicalSymmetry::new(r.algebra, r.perm, r.blocks)
    }
}

impl CanonicalSymmetry {
    /// Checks that `perm` is a bijection between blocks of equal dimension and
    /// that operator sizes fit. Unitarity is not enforced here: a non-unitary
    /// entry describes a map that is not a symmetry, which downstream checks
    /// report.
    pub fn new(algebra: BlockAlgebra, perm: Vec<usize>, blocks: Vec<BlockOperator>) -> Result<Self> {
        let k = algebra.num_blocks();
        if perm.len() != k || blocks.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "{} permutation entries and {} operators for {k} blocks",
                perm.len(),
                blocks.len()
            )));
        }
        let mut seen = vec![false; k];
        for (i, &j) in perm.iter().enumerate() {
            algebra.check_block(j)?;
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::DimensionMismatch(format!("block {j} is hit twice")));
            }
            if algebra.dim(i) != algebra.dim(j) {
                return Err(Error::DimensionMismatch(format!("block {i} cannot map to block {j}")));
            }
            let n = algebra.dim(i);
            if blocks[i].u.rows() != n || blocks[i].u.cols() != n {
                return Err(Error::DimensionMismatch(format!("operator {i} must be {n}x{n}")));
            }
        }
        Ok(Self { algebra, perm, blocks })
    }

    pub fn identity(algebra: &BlockAlgebra) -> Self {
        let blocks = algebra
            .dims()
            .iter()
            .map(|&n| BlockOperator { u: ComplexMatrix::identity(n), antiunitary: false })
            .collect();
        Self { algebra: algebra.clone(), perm: (0..algebra.num_blocks()).collect(), blocks }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn blocks(&self) -> &[BlockOperator] {
        &self.blocks
    }

    /// Max unitarity defect over the blocks.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks.iter().map(BlockOperator::unitarity_defect).fold(0.0, f64::max)
    }

    /// The complex-linear action on elements.
    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let blocks = (0..self.algebra.num_blocks())
            .map(|i| self.blocks[i].conjugate(a.block(self.perm[i])))
            .collect();
        AlgebraElement::new(self.algebra.clone(), blocks).expect("sizes checked")
    }

    pub fn jordan_map(&self) -> JordanMap {
        JordanMap::from_sa_fn(&self.algebra, |x| self.apply(x))
    }

    /// The Wigner oracle this form denotes.
    pub fn oracle(&self) -> CanonicalOracle {
        CanonicalOracle(self.clone())
    }
}

/// Black-box Wigner map of a [`CanonicalSymmetry`]. Outputs are renormalized,
/// so a non-unitary entry yields a well-formed but non-symmetric oracle.
#[derive(Clone, Debug)]
pub struct CanonicalOracle(CanonicalSymmetry);

impl WignerOracle for CanonicalOracle {
    fn algebra(&self) -> &BlockAlgebra {
        &self.0.algebra
    }

    fn apply(&self, omega: &PureState) -> PureState {
        let i = omega.block();
        let j = self.0.perm[i];
        let v = self.0.blocks[i].act(omega.psi());
        if vec_norm(&v) < 1e-300 {
            // singular entry: any fixed output keeps the oracle total
            return PureState::basis(&self.0.algebra, j, 0).expect("block exists");
        }
        PureState::normalized(self.0.algebra.clone(), j, v).expect("nonzero vector")
    }
}
