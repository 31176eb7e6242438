// SPDX-License-Identifier: Apache-2.0

//! Seeded generators. Every random quantity in the crate is drawn from a
//! `ChaCha8Rng` derived from a caller-supplied `u64` seed; nothing reads the
//! clock or OS entropy.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, BlockAlgebra};
use crate::matrix::{c64, vec_norm, ComplexMatrix, C64};
use crate::states::{PureState, State};
use crate::symmetry::canonical::{BlockOperator, CanonicalSymmetry};
use crate::symmetry::JordanSymmetry;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for trial `index` of sweep `stream`. Sweeps derive
/// one generator per trial so sequential and parallel runs draw identical
/// samples.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> SeededRng {
    rng(splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index))
}

pub fn gaussian_c64(rng: &mut SeededRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector(rng: &mut SeededRng, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_unitary(rng: &mut SeededRng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian_c64(rng));
    let qr = g.inner_matrix().clone().qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..n)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c64(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

/// Random matrix with Frobenius norm one.
pub fn unit_matrix(rng: &mut SeededRng, n: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(n, n, |_, _| gaussian_c64(rng));
    let norm = m.frobenius_norm();
    m.scale_real(1.0 / norm)
}

/// Random element of unit Frobenius norm.
pub fn element(rng: &mut SeededRng, algebra: &BlockAlgebra) -> AlgebraElement {
    let blocks = algebra
        .dims()
        .iter()
        .map(|&n| ComplexMatrix::from_fn(n, n, |_, _| gaussian_c64(rng)))
        .collect();
    let a = AlgebraElement::new(algebra.clone(), blocks).expect("block sizes match");
    let norm = a.norm();
    a.scale(c64(1.0 / norm, 0.0))
}

/// Random self-adjoint element of unit Frobenius norm.
pub fn sa_element(rng: &mut SeededRng, algebra: &BlockAlgebra) -> AlgebraElement {
    let coords: Vec<f64> = (0..algebra.sa_dim()).map(|_| rng.sample(StandardNormal)).collect();
    let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    let coords: Vec<f64> = coords.iter().map(|x| x / norm).collect();
    AlgebraElement::from_sa_coords(algebra, &coords).expect("dimension matches")
}

/// Random positive element `b*b` scaled so that `0 <= b*b <= 1`.
pub fn effect(rng: &mut SeededRng, algebra: &BlockAlgebra) -> AlgebraElement {
    let b = element(rng, algebra);
    let p = b.adjoint().multiply(&b).expect("same algebra");
    let top = p.max_eigenvalue().unwrap_or(1.0).max(1e-300);
    let s: f64 = rng.random_range(0.0..=1.0);
    p.scale(c64(s / top, 0.0))
}

pub fn pure_state_in_block(rng: &mut SeededRng, algebra: &BlockAlgebra, block: usize) -> PureState {
    let psi = unit_vector(rng, algebra.dim(block));
    PureState::new(algebra.clone(), block, psi).expect("unit vector")
}

/// Random pure state, block chosen uniformly.
pub fn pure_state(rng: &mut SeededRng, algebra: &BlockAlgebra) -> PureState {
    let block = rng.random_range(0..algebra.num_blocks());
    pure_state_in_block(rng, algebra, block)
}

/// Random faithful mixed state.
pub fn state(rng: &mut SeededRng, algebra: &BlockAlgebra) -> State {
    let b = element(rng, algebra);
    let p = b.adjoint().multiply(&b).expect("same algebra");
    let tr: f64 = p.blocks().iter().map(|m| m.trace().re).sum();
    let rho = p.blocks().iter().map(|m| m.scale_real(1.0 / tr).hermitian_part()).collect();
    State::new(algebra.clone(), rho).expect("positive with unit trace")
}

/// How [`canonical_symmetry`] picks the per-block transpose factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransposeMode {
    None,
    All,
    Random,
}

/// Random permutation of the block indices that only exchanges blocks of equal
/// dimension.
pub fn block_permutation(rng: &mut SeededRng, algebra: &BlockAlgebra) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..algebra.num_blocks()).collect();
    let mut dims: Vec<usize> = algebra.dims().to_vec();
    dims.sort_unstable();
    dims.dedup();
    for n in dims {
        let slots: Vec<usize> = (0..algebra.num_blocks()).filter(|&i| algebra.dim(i) == n).collect();
        let mut targets = slots.clone();
        targets.shuffle(rng);
        for (s, t) in slots.into_iter().zip(targets) {
            perm[s] = t;
        }
    }
    perm
}

/// Random Jordan symmetry in canonical form: a block permutation among equal
/// dimensions, a Haar unitary per block and an optional transpose per block.
pub fn canonical_symmetry(rng: &mut SeededRng, algebra: &BlockAlgebra, mode: TransposeMode) -> CanonicalSymmetry {
    let perm = block_permutation(rng, algebra);
    let ops = algebra
        .dims()
        .iter()
        .map(|&n| {
            let u = haar_unitary(rng, n);
            let antiunitary = match mode {
                TransposeMode::None => false,
                TransposeMode::All => true,
                TransposeMode::Random => rng.random_bool(0.5),
            };
            BlockOperator { u, antiunitary }
        })
        .collect();
    CanonicalSymmetry::new(algebra.clone(), perm, ops).expect("valid by construction")
}

/// Random Jordan symmetry, see [`canonical_symmetry`].
pub fn jordan_symmetry(rng: &mut SeededRng, algebra: &BlockAlgebra, mode: TransposeMode) -> JordanSymmetry {
    JordanSymmetry::from_canonical(&canonical_symmetry(rng, algebra, mode)).expect("Haar unitaries are unitary")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary_and_seeded() {
        let mut r1 = rng(7);
        let mut r2 = rng(7);
        let u = haar_unitary(&mut r1, 5);
        assert_eq!(u, haar_unitary(&mut r2, 5));
        let g = &u.adjoint() * &u;
        assert!((&g - &ComplexMatrix::identity(5)).max_abs() < 1e-12);
    }

    #[test]
    fn trial_streams_differ() {
        let a = unit_vector(&mut trial_rng(1, 0, 0), 3);
        let b = unit_vector(&mut trial_rng(1, 0, 1), 3);
        let c = unit_vector(&mut trial_rng(1, 1, 0), 3);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, unit_vector(&mut trial_rng(1, 0, 0), 3));
    }

    #[test]
    fn permutation_respects_dimensions() {
        let alg = BlockAlgebra::new(vec![2, 3, 2, 1, 3]).unwrap();
        for seed in 0..20 {
            let p = block_permutation(&mut rng(seed), &alg);
            let mut seen = p.clone();
            seen.sort_unstable();
            assert_eq!(seen, vec![0, 1, 2, 3, 4]);
            for (i, &j) in p.iter().enumerate() {
                assert_eq!(alg.dim(i), alg.dim(j));
            }
        }
    }

    #[test]
    fn effects_lie_between_zero_and_one() {
        let alg = BlockAlgebra::new(vec![3, 2]).unwrap();
        let mut r = rng(3);
        for _ in 0..10 {
            let e = effect(&mut r, &alg);
            assert!(e.min_eigenvalue().unwrap() >= -1e-12);
            assert!(e.max_eigenvalue().unwrap() <= 1.0 + 1e-12);
        }
    }
}
