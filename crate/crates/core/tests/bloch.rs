// SPDX-License-Identifier: Apache-2.0

use cstar_sym::algebra::BlockAlgebra;
use cstar_sym::bloch::{
    bloch_to_density, chart_from_states, corner_rotation, density_to_bloch, induced_rotation, orientation_of, sphere_tp,
    BlochVector, Orientation,
};
use cstar_sym::matrix::c64;
use cstar_sym::random::{self, TransposeMode};
use proptest::prelude::*;

fn ball() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("inside the ball", |(x, y, z)| x * x + y * y + z * z <= 1.0)
        .prop_map(|(x, y, z)| BlochVector::new(x, y, z).unwrap())
}

fn sphere() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("away from the origin", |(x, y, z)| x * x + y * y + z * z > 1e-4)
        .prop_map(|(x, y, z)| {
            let n = (x * x + y * y + z * z).sqrt();
            BlochVector { x: x / n, y: y / n, z: z / n }
        })
}

fn m2() -> BlockAlgebra {
    BlockAlgebra::new(vec![2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_map_is_affine(v in ball(), w in ball(), t in 0.0f64..1.0) {
        let mix = &bloch_to_density(v).unwrap().scale_real(t) + &bloch_to_density(w).unwrap().scale_real(1.0 - t);
        let back = density_to_bloch(&mix).unwrap();
        let want = [t * v.x + (1.0 - t) * w.x, t * v.y + (1.0 - t) * w.y, t * v.z + (1.0 - t) * w.z];
        prop_assert!(back.to_array().iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn sphere_tp_is_the_trace_pairing(x in sphere(), y in sphere()) {
        let direct = (&bloch_to_density(x).unwrap() * &bloch_to_density(y).unwrap()).trace().re;
        prop_assert!((sphere_tp(x, y).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn rotations_compose_in_reverse(seed in any::<u64>()) {
        let a = m2();
        let mut rng = random::rng(seed);
        let j1 = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let j2 = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let (r1, r2) = (induced_rotation(&j1).unwrap(), induced_rotation(&j2).unwrap());
        let r12 = induced_rotation(&j1.compose(&j2).unwrap()).unwrap();
        prop_assert!(r12.max_distance(&r2.then_after(&r1)) < 1e-10);
        prop_assert!(r1.orthogonality_defect() < 1e-10);
    }

    #[test]
    fn determinant_tracks_anti_unitarity(seed in any::<u64>(), all in any::<bool>()) {
        let mode = if all { TransposeMode::All } else { TransposeMode::None };
        let j = random::jordan_symmetry(&mut random::rng(seed), &m2(), mode);
        let want = if all { -1.0 } else { 1.0 };
        prop_assert!((induced_rotation(&j).unwrap().det() - want).abs() < 1e-10);
    }

    #[test]
    fn corner_determinant_is_chart_independent(seed in any::<u64>(), k in 0usize..3, theta in 0.0f64..std::f64::consts::TAU) {
        let dims: [&[usize]; 3] = [&[3], &[2, 2], &[4, 1]];
        let a = BlockAlgebra::new(dims[k].to_vec()).unwrap();
        let mut rng = random::rng(seed);
        let j = random::jordan_symmetry(&mut rng, &a, TransposeMode::Random);
        let x = random::pure_state_in_block(&mut rng, &a, 0);
        let y = random::pure_state_in_block(&mut rng, &a, 0);
        let chart = chart_from_states(&x, &y).unwrap();
        let r = corner_rotation(&j, &chart, &x, &y).unwrap();
        let alt = corner_rotation(&j, &chart.with_second_phase(c64(theta.cos(), theta.sin())), &x, &y).unwrap();
        prop_assert!((r.det().abs() - 1.0).abs() < 1e-9);
        prop_assert_eq!(r.det().signum(), alt.det().signum());
        let report = orientation_of(&j).unwrap();
        prop_assert!(report.consistent);
        let first = report.corner_checks.iter().find(|c| c.block == 0).unwrap();
        prop_assert_eq!(first.det.signum(), r.det().signum());
    }
}

#[test]
fn verdicts() {
    let a = BlockAlgebra::new(vec![2, 2]).unwrap();
    let mut rng = random::rng(5);
    let pres = orientation_of(&random::jordan_symmetry(&mut rng, &a, TransposeMode::None)).unwrap();
    assert_eq!(pres.verdict, Orientation::Preserving);
    let rev = orientation_of(&random::jordan_symmetry(&mut rng, &a, TransposeMode::All)).unwrap();
    assert_eq!(rev.verdict, Orientation::Reversing);
    let c = BlockAlgebra::new(vec![1, 1, 1]).unwrap();
    let triv = orientation_of(&random::jordan_symmetry(&mut rng, &c, TransposeMode::Random)).unwrap();
    assert_eq!(triv.verdict, Orientation::Trivial);
    assert!(triv.corner_checks.is_empty());
}
