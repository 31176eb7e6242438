// SPDX-License-Identifier: Apache-2.0

//! Symmetries of finite-dimensional C*-algebras.
//!
//! An algebra is a direct sum of full matrix blocks ([`BlockAlgebra`]). On top
//! of that the crate provides pure states and their transition probabilities,
//! Jordan, Kadison and Wigner symmetries with conversions between them, the
//! central decomposition of a Jordan symmetry into homomorphism and
//! anti-homomorphism parts, extraction of implementing (anti-)unitaries, and
//! the Bloch-ball orientation of a symmetry.

pub mod algebra;
pub mod bloch;
pub mod error;
pub mod extraction;
pub mod matrix;
pub mod par;
pub mod random;
pub mod selftest;
pub mod states;
pub mod symmetry;
pub mod thomsen;

pub use algebra::{hermitian_basis, AlgebraElement, BlockAlgebra};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use states::{PureState, State};
pub use symmetry::{JordanMap, JordanSymmetry, KadisonView};
