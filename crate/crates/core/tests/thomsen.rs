// SPDX-License-Identifier: Apache-2.0

use cstar_sym::algebra::{hermitian_basis, AlgebraElement, BlockAlgebra};
use cstar_sym::random::{self, TransposeMode};
use cstar_sym::symmetry::{check_herstein_identities, JordanMap, JordanSymmetry};
use cstar_sym::thomsen::{decompose_in_order, defect_spaces, thomsen_decompose, verify_centrality, BlockLabel};
use proptest::prelude::*;
use rand::seq::SliceRandom;

const SHAPES: [&[usize]; 5] = [&[2], &[3, 1], &[2, 2], &[4, 3, 1], &[1, 2, 2]];

fn expected_labels(a: &BlockAlgebra, c: &cstar_sym::symmetry::CanonicalSymmetry) -> Vec<BlockLabel> {
    a.dims()
        .iter()
        .zip(c.blocks())
        .map(|(&n, op)| match (n, op.antiunitary) {
            (1, _) => BlockLabel::Both,
            (_, false) => BlockLabel::Hom,
            (_, true) => BlockLabel::Anti,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn labels_follow_the_canonical_form(seed in any::<u64>(), k in 0usize..5) {
        let a = BlockAlgebra::new(SHAPES[k].to_vec()).unwrap();
        let c = random::canonical_symmetry(&mut random::rng(seed), &a, TransposeMode::Random);
        let j = JordanSymmetry::from_canonical(&c).unwrap();
        let dec = thomsen_decompose(&j).unwrap();
        prop_assert_eq!(&dec.block_labels, &expected_labels(&a, &c));
        // p's are sums of block identities
        for (p, label) in dec.projections().into_iter().zip([BlockLabel::Hom, BlockLabel::Anti, BlockLabel::Both]) {
            let mask: Vec<bool> = dec.block_labels.iter().map(|l| *l == label).collect();
            prop_assert!(p.sub(&AlgebraElement::central_projection(&a, &mask)).unwrap().max_abs() < 1e-9);
        }
        prop_assert!(verify_centrality(&dec, &a).unwrap().passed);
    }

    #[test]
    fn transposing_exchanges_hom_and_anti(seed in any::<u64>(), k in 0usize..5) {
        let a = BlockAlgebra::new(SHAPES[k].to_vec()).unwrap();
        let j = random::jordan_symmetry(&mut random::rng(seed), &a, TransposeMode::Random);
        let t = JordanSymmetry::try_new(JordanMap::transpose_map(&a)).unwrap();
        let (d, dt) = (thomsen_decompose(&j).unwrap(), thomsen_decompose(&t.compose(&j).unwrap()).unwrap());
        prop_assert!(d.p1.distance(&dt.p2).unwrap() < 1e-9);
        prop_assert!(d.p2.distance(&dt.p1).unwrap() < 1e-9);
        prop_assert!(d.p3.distance(&dt.p3).unwrap() < 1e-9);
    }

    #[test]
    fn one_dimensional_blocks_are_commutative(seed in any::<u64>(), k in 0usize..5) {
        let a = BlockAlgebra::new(SHAPES[k].to_vec()).unwrap();
        let j = random::jordan_symmetry(&mut random::rng(seed), &a, TransposeMode::Random);
        let dec = thomsen_decompose(&j).unwrap();
        for (i, &n) in a.dims().iter().enumerate() {
            prop_assert_eq!(dec.block_labels[i] == BlockLabel::Both, n == 1);
        }
    }

    #[test]
    fn defect_spaces_annihilate_each_other(seed in any::<u64>(), k in 0usize..5) {
        let a = BlockAlgebra::new(SHAPES[k].to_vec()).unwrap();
        let j = random::jordan_symmetry(&mut random::rng(seed), &a, TransposeMode::Random);
        let (s1, s2) = defect_spaces(&j);
        for x in &s1.basis {
            for y in &s2.basis {
                prop_assert!((x * y).max_abs() < 1e-9 && (y * x).max_abs() < 1e-9);
            }
        }
        let report = check_herstein_identities(&j, 8, seed);
        prop_assert!(report.passed, "{:?}", report.checks.iter().find(|c| !c.passed));
    }

    #[test]
    fn independent_of_basis_order(seed in any::<u64>(), k in 0usize..5) {
        let a = BlockAlgebra::new(SHAPES[k].to_vec()).unwrap();
        let mut rng = random::rng(seed);
        let j = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let mut order: Vec<usize> = (0..a.sa_dim()).collect();
        order.shuffle(&mut rng);
        let (d, e) = (thomsen_decompose(&j).unwrap(), decompose_in_order(&j, &order).unwrap());
        for (p, q) in d.projections().into_iter().zip(e.projections()) {
            prop_assert!(p.distance(q).unwrap() < 1e-8);
        }
    }
}

#[test]
fn identity_and_transpose_on_full_matrix_algebra() {
    let a = BlockAlgebra::new(vec![3]).unwrap();
    let id = thomsen_decompose(&JordanSymmetry::identity(&a)).unwrap();
    assert_eq!(id.block_labels, [BlockLabel::Hom]);
    let (s1, s2) = defect_spaces(&JordanSymmetry::identity(&a));
    assert!(s1.is_empty());
    assert!(!s2.is_empty());
    let t = thomsen_decompose(&JordanSymmetry::try_new(JordanMap::transpose_map(&a)).unwrap()).unwrap();
    assert_eq!(t.block_labels, [BlockLabel::Anti]);
    assert_eq!(t.report().p2_blocks, [1]);
    assert_eq!(hermitian_basis(&a).len(), 9);
}

#[test]
fn malformed_order_is_rejected() {
    let a = BlockAlgebra::new(vec![2]).unwrap();
    assert!(decompose_in_order(&JordanSymmetry::identity(&a), &[0, 1, 2, 2]).is_err());
}
