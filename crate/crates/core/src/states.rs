// SPDX-License-Identifier: Apache-2.0

//! States and pure states on a block algebra, carriers, unitary equivalence,
//! and the transition probability of two pure states computed three ways:
//! from the vector overlap, from the norm distance of the states, and by
//! evaluating one state on the carrier of the other.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{c64, inner, vec_norm, ComplexMatrix, C64};

/// Tolerance on `||psi|| = 1` for pure-state vectors.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on hermiticity, positivity and normalization of mixed states.
pub const STATE_TOL: f64 = 1e-10;
/// Feasibility tolerance of [`tp_inf_witness`].
pub const WITNESS_TOL: f64 = 1e-9;

/// A (mixed) state `a -> sum_i Tr(rho_i a_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    algebra: BlockAlgebra,
    rho: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    blocks: Vec<ComplexMatrix>,
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr { blocks: self.rho.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = StateRepr::deserialize(d)?;
        let dims = repr.blocks.iter().map(ComplexMatrix::rows).collect();
        let algebra = BlockAlgebra::new(dims).map_err(D::Error::custom)?;
        State::new(algebra, repr.blocks).map_err(D::Error::custom)
    }
}

impl State {
    /// Validates hermiticity, positivity and unit total trace.
    pub fn new(algebra: BlockAlgebra, rho: Vec<ComplexMatrix>) -> Result<Self> {
        let el = AlgebraElement::new(algebra.clone(), rho)?;
        let dev = el.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!("density not self-adjoint (deviation {dev:e})")));
        }
        let el = el.map_blocks(ComplexMatrix::hermitian_part);
        let lo = el.min_eigenvalue().expect("hermitian");
        if lo < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:e}")));
        }
        let tr: f64 = el.blocks().iter().map(|b| b.trace().re).sum();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("total trace {tr}")));
        }
        Ok(Self { algebra, rho: el.blocks().to_vec() })
    }

    /// Uniform mixture `1_A / N`.
    pub fn tracial(algebra: &BlockAlgebra) -> Self {
        let n = algebra.total_dim() as f64;
        let rho = algebra.dims().iter().map(|&k| ComplexMatrix::identity(k).scale_real(1.0 / n)).collect();
        Self { algebra: algebra.clone(), rho }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn rho(&self) -> &[ComplexMatrix] {
        &self.rho
    }

    /// The densities as an algebra element.
    pub fn density(&self) -> AlgebraElement {
        AlgebraElement::new(self.algebra.clone(), self.rho.clone()).expect("validated")
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<C64> {
        if a.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.rho.iter().zip(a.blocks()).map(|(r, x)| (r * x).trace()).sum())
    }

    /// Support projection: blockwise range projection of the density.
    pub fn carrier(&self) -> AlgebraElement {
        self.density().map_blocks(ComplexMatrix::range_projection)
    }

    /// Coordinates of the density in the hermitian basis; `omega(a) = s . coords(a)`.
    pub fn coords(&self) -> Vec<f64> {
        self.density().sa_coords()
    }
}

/// A vector state `a -> <psi, a_block psi>` concentrated in one block. The
/// phase of `psi` carries no meaning.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    algebra: BlockAlgebra,
    block: usize,
    psi: Vec<C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PureRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    algebra: Option<BlockAlgebra>,
    block: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// JSON form of a pure state. The `algebra` field is optional on input; when
/// absent the caller has to supply the algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PureStateFile(PureRepr);

impl PureStateFile {
    pub fn algebra(&self) -> Option<&BlockAlgebra> {
        self.0.algebra.as_ref()
    }

    /// Resolves the file against an algebra, preferring the embedded one.
    pub fn into_state(self, fallback: Option<&BlockAlgebra>) -> Result<PureState> {
        let algebra = match (self.0.algebra, fallback) {
            (Some(a), _) => a,
            (None, Some(a)) => a.clone(),
            (None, None) => return Err(Error::InvalidState("pure state without an algebra".into())),
        };
        if self.0.re.len() != self.0.im.len() {
            return Err(Error::DimensionMismatch("re and im arrays differ in length".into()));
        }
        let psi = self.0.re.iter().zip(&self.0.im).map(|(&r, &i)| c64(r, i)).collect();
        PureState::new(algebra, self.0.block, psi)
    }
}

impl From<&PureState> for PureStateFile {
    fn from(p: &PureState) -> Self {
        PureStateFile(PureRepr {
            algebra: Some(p.algebra.clone()),
            block: p.block,
            re: p.psi.iter().map(|z| z.re).collect(),
            im: p.psi.iter().map(|z| z.im).collect(),
        })
    }
}

impl PureState {
    /// Requires `||psi|| = 1` within [`UNIT_TOL`].
    pub fn new(algebra: BlockAlgebra, block: usize, psi: Vec<C64>) -> Result<Self> {
        algebra.check_block(block)?;
        if psi.len() != algebra.dim(block) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in block of dimension {}",
                psi.len(),
                algebra.dim(block)
            )));
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = vec_norm(&psi);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidState(format!("vector norm {norm} is not 1")));
        }
        Ok(Self { algebra, block, psi })
    }

    /// Normalizes `psi` first.
    pub fn normalized(algebra: BlockAlgebra, block: usize, psi: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&psi);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(algebra, block, psi.into_iter().map(|z| z / norm).collect())
    }

    /// The state given by the `k`-th standard basis vector of `block`.
    pub fn basis(algebra: &BlockAlgebra, block: usize, k: usize) -> Result<Self> {
        algebra.check_block(block)?;
        let n = algebra.dim(block);
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let mut psi = vec![C64::default(); n];
        psi[k] = c64(1.0, 0.0);
        Self::new(algebra.clone(), block, psi)
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn psi(&self) -> &[C64] {
        &self.psi
    }

    /// `|psi><psi|` in its block.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.psi, &self.psi)
    }

    /// The density form as an algebra element.
    pub fn density(&self) -> AlgebraElement {
        AlgebraElement::embed(&self.algebra, self.block, self.projector()).expect("block checked")
    }

    pub fn to_state(&self) -> State {
        State { algebra: self.algebra.clone(), rho: self.density().blocks().to_vec() }
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<C64> {
        if a.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(inner(&self.psi, &a.block(self.block).mul_vec(&self.psi)))
    }

    /// Carrier `|psi><psi|`.
    pub fn carrier(&self) -> AlgebraElement {
        self.density()
    }

    /// Frobenius distance between density matrices; zero iff the rays agree.
    pub fn ray_distance(&self, other: &Self) -> Result<f64> {
        self.density().distance(&other.density())
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }
}

/// Anything that evaluates on algebra elements.
pub trait Evaluate {
    fn evaluate(&self, a: &AlgebraElement) -> Result<C64>;
}

impl Evaluate for State {
    fn evaluate(&self, a: &AlgebraElement) -> Result<C64> {
        self.eval(a)
    }
}

impl Evaluate for PureState {
    fn evaluate(&self, a: &AlgebraElement) -> Result<C64> {
        self.eval(a)
    }
}

/// `omega(a)`.
pub fn state_eval(omega: &impl Evaluate, a: &AlgebraElement) -> Result<C64> {
    omega.evaluate(a)
}

/// Support projection of a state.
pub fn carrier(omega: &State) -> AlgebraElement {
    omega.carrier()
}

/// Pure states of a block algebra have equivalent GNS representations iff
/// they live in the same block.
pub fn equivalent(a: &PureState, b: &PureState) -> Result<bool> {
    a.same_algebra(b)?;
    Ok(a.block == b.block)
}

/// `|<psi, psi'>|^2` for equivalent states, `0` otherwise.
pub fn tp_amplitude(a: &PureState, b: &PureState) -> Result<f64> {
    if !equivalent(a, b)? {
        return Ok(0.0);
    }
    Ok(inner(&a.psi, &b.psi).norm_sqr().min(1.0))
}

/// `1 - ||omega - omega'||^2 / 4`, the norm being the trace norm of the
/// density difference summed over blocks.
pub fn tp_norm(a: &PureState, b: &PureState) -> Result<f64> {
    a.same_algebra(b)?;
    let diff = a.density().sub(&b.density())?;
    let dist: f64 = diff.blocks().iter().map(ComplexMatrix::trace_norm).sum();
    Ok((1.0 - 0.25 * dist * dist).clamp(0.0, 1.0))
}

/// `omega(p(omega'))`: the first state evaluated on the carrier of the second.
pub fn tp_carrier(a: &PureState, b: &PureState) -> Result<f64> {
    a.same_algebra(b)?;
    let p = b.to_state().carrier();
    Ok(a.eval(&p)?.re.clamp(0.0, 1.0))
}

/// Value `omega(a)` of one element of the feasible set
/// `{a : 0 <= a <= 1, omega'(a) = 1}` whose infimum is the transition
/// probability. The carrier of `omega'` attains the infimum.
pub fn tp_inf_witness(a: &PureState, b: &PureState, witness: &AlgebraElement) -> Result<f64> {
    a.same_algebra(b)?;
    if witness.algebra() != a.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let dev = witness.hermitian_deviation();
    if dev > WITNESS_TOL {
        return Err(Error::InfeasibleWitness(format!("not self-adjoint (deviation {dev:e})")));
    }
    let w = witness.map_blocks(ComplexMatrix::hermitian_part);
    let lo = w.min_eigenvalue().expect("hermitian");
    let hi = w.max_eigenvalue().expect("hermitian");
    if lo < -WITNESS_TOL || hi > 1.0 + WITNESS_TOL {
        return Err(Error::InfeasibleWitness(format!("spectrum [{lo}, {hi}] not inside [0, 1]")));
    }
    let on_target = b.eval(&w)?.re;
    if (on_target - 1.0).abs() > WITNESS_TOL {
        return Err(Error::InfeasibleWitness(format!("omega'(a) = {on_target}, expected 1")));
    }
    Ok(a.eval(&w)?.re)
}
