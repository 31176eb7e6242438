// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("infeasible witness: {0}")]
    InfeasibleWitness(String),
    #[error("map is not a validated Jordan symmetry: {0}")]
    NotValidated(String),
    #[error("oracle is inconsistent with a Wigner symmetry: {0}")]
    OracleInconsistent(String),
    #[error("Thomsen decomposition is inconsistent: {0}")]
    DecompositionInconsistent(String),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("block kind mismatch: {0}")]
    KindMismatch(String),
    #[error("singular extraction: {0}")]
    SingularExtraction(String),
    #[error("operators have different antiunitary flags or blocks")]
    FlagMismatch,
    #[error("Bloch vector outside the unit ball (norm {norm})")]
    OutOfBall { norm: f64 },
    #[error("not a 2x2 density matrix: {0}")]
    NotDensity(String),
    #[error("Bloch vector not on the unit sphere (norm {norm})")]
    NotOnSphere { norm: f64 },
    #[error("pure states are inequivalent")]
    InequivalentStates,
    #[error("pure states define the same ray")]
    EqualRays,
    #[error("projection does not have rank 2 (rank {rank})")]
    NotRank2 { rank: usize },
    #[error("map is not a Jordan isomorphism: {0}")]
    NotJordan(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
