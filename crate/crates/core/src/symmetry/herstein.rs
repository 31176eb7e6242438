// SPDX-License-Identifier: Apache-2.0

//! The defect elements `a^b = i[J(ab) - J(a)J(b)]`, `a_b = i[J(ab) - J(b)J(a)]`
//! and Herstein's identities for Jordan symmetries, checked numerically.

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::matrix::c64;
use crate::random;

use super::JordanMap;

/// Residual bound for every identity.
pub const HERSTEIN_TOL: f64 = 1e-8;

const STREAM_HERSTEIN: u64 = 0x4845_5253;
/// Linearity identities need only a handful of spot checks.
const LINEARITY_SPOTS: usize = 5;

/// Identity labels in report order.
pub const IDENTITIES: [&str; 9] = ["i", "ii", "iii", "iv", "v", "vi", "vii-x", "A1A2", "A2A1"];

/// `(a^b, a_b)`.
pub fn herstein_defects(j: &JordanMap, a: &AlgebraElement, b: &AlgebraElement) -> Result<(AlgebraElement, AlgebraElement)> {
    if a.algebra() != j.algebra() || b.algebra() != j.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let jab = j.apply(&a.multiply(b)?)?;
    let (ja, jb) = (j.apply(a)?, j.apply(b)?);
    let i = c64(0.0, 1.0);
    let upper = jab.sub(&ja.multiply(&jb)?)?.scale(i);
    let lower = jab.sub(&jb.multiply(&ja)?)?.scale(i);
    Ok((upper, lower))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_residual: f64,
    /// First trial whose residual reached the tolerance.
    pub witness: Option<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HersteinReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
}

impl HersteinReport {
    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Residuals of all identities for one random quadruple `(a, b, c, d)`.
fn residuals(j: &JordanMap, a: &AlgebraElement, b: &AlgebraElement, c: &AlgebraElement, d: &AlgebraElement, linearity: bool) -> [f64; 9] {
    let jm = |x: &AlgebraElement| j.apply(x).expect("same algebra");
    let mul = |x: &AlgebraElement, y: &AlgebraElement| x.multiply(y).expect("same algebra");
    let dist = |x: &AlgebraElement, y: &AlgebraElement| x.distance(y).expect("same algebra");
    let i = c64(0.0, 1.0);

    let (ja, jb, jc, jd) = (jm(a), jm(b), jm(c), jm(d));
    let r1 = dist(&jm(&mul(&mul(a, b), a)), &mul(&mul(&ja, &jb), &ja));
    let abc_cba = mul(&mul(a, b), c).add(&mul(&mul(c, b), a)).expect("same algebra");
    let r2 = dist(&jm(&abc_cba), &mul(&mul(&ja, &jb), &jc).add(&mul(&mul(&jc, &jb), &ja)).expect("same algebra"));

    let (up, low) = herstein_defects(j, a, b).expect("same algebra");
    let r3 = mul(&up, &low).norm();
    let comm = mul(a, b).sub(&mul(b, a)).expect("same algebra");
    let jcommc = jm(&mul(&comm, c));
    let r4 = dist(&mul(&mul(&up, &jc), &up), &mul(&up, &jcommc).scale(i));
    let r5 = mul(&mul(&up, &jcommc), &low).norm();
    let jcomm = jm(&comm);
    let r6 = mul(&mul(&mul(&mul(&up, &jcomm), &jc), &jcomm), &low).norm();

    let r7 = if linearity {
        let bc = b.add(c).expect("same algebra");
        let ab = a.add(b).expect("same algebra");
        let (up_ac, low_ac) = herstein_defects(j, a, c).expect("same algebra");
        let (up_abc, low_abc) = herstein_defects(j, a, &bc).expect("same algebra");
        let (up_bc, low_bc) = herstein_defects(j, b, c).expect("same algebra");
        let (up_ab_c, low_ab_c) = herstein_defects(j, &ab, c).expect("same algebra");
        [
            dist(&up.add(&up_ac).expect("same algebra"), &up_abc),
            dist(&low.add(&low_ac).expect("same algebra"), &low_abc),
            dist(&up_ac.add(&up_bc).expect("same algebra"), &up_ab_c),
            dist(&low_ac.add(&low_bc).expect("same algebra"), &low_ab_c),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    } else {
        0.0
    };

    let d1 = jm(&mul(a, b)).sub(&mul(&ja, &jb)).expect("same algebra");
    let d2 = jm(&mul(c, d)).sub(&mul(&jd, &jc)).expect("same algebra");
    let r8 = mul(&d1, &d2).norm();
    let e1 = jm(&mul(a, b)).sub(&mul(&jb, &ja)).expect("same algebra");
    let e2 = jm(&mul(c, d)).sub(&mul(&jc, &jd)).expect("same algebra");
    let r9 = mul(&e1, &e2).norm();
    [r1, r2, r3, r4, r5, r6, r7, r8, r9]
}

/// Checks identities (i)-(vi) on `trials` random triples of general elements,
/// spot-checks the linearity identities (vii)-(x), and checks
/// `(J(ab) - J(a)J(b))(J(cd) - J(d)J(c)) = 0` together with its mirror image
/// on the same random quadruples. The map is not required to be a Jordan
/// symmetry, so corrupted maps produce witnesses instead of errors.
pub fn check_herstein_identities(j: &JordanMap, trials: usize, seed: u64) -> HersteinReport {
    let alg = j.algebra();
    let mut checks: Vec<IdentityCheck> = IDENTITIES
        .iter()
        .map(|n| IdentityCheck { name: n.to_string(), max_residual: 0.0, witness: None, passed: true })
        .collect();
    for t in 0..trials {
        let mut rng = random::trial_rng(seed, STREAM_HERSTEIN, t as u64);
        let a = random::element(&mut rng, alg);
        let b = random::element(&mut rng, alg);
        let c = random::element(&mut rng, alg);
        let d = random::element(&mut rng, alg);
        let r = residuals(j, &a, &b, &c, &d, t < LINEARITY_SPOTS);
        for (check, &value) in checks.iter_mut().zip(r.iter()) {
            let value = if value.is_finite() { value } else { f64::INFINITY };
            check.max_residual = check.max_residual.max(value);
            if value >= HERSTEIN_TOL && check.witness.is_none() {
                check.witness = Some(t);
            }
        }
    }
    for check in &mut checks {
        check.passed = check.max_residual < HERSTEIN_TOL;
    }
    let passed = checks.iter().all(|c| c.passed);
    HersteinReport { trials, seed, checks, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockAlgebra;
    use crate::matrix::ComplexMatrix;
    use nalgebra::DMatrix;

    #[test]
    fn identity_defects() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let a = AlgebraElement::embed(&alg, 0, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        let b = a.adjoint();
        let (up, low) = herstein_defects(&JordanMap::identity(&alg), &a, &b).unwrap();
        assert!(up.norm() < 1e-15);
        // i[ab - ba] = i diag(1, -1)
        let expect = AlgebraElement::embed(
            &alg,
            0,
            ComplexMatrix::from_row_major(2, 2, vec![c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)]).unwrap(),
        )
        .unwrap();
        assert!(low.distance(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn transpose_defects_on_symmetric_pair() {
        // a = [[1,1],[1,0]], b = [[0,1],[1,1]]: ab = [[1,2],[0,1]], ab^T = b^T a^T = ba
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let a = AlgebraElement::embed(&alg, 0, ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 0.0])).unwrap();
        let b = AlgebraElement::embed(&alg, 0, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 1.0])).unwrap();
        let (up, low) = herstein_defects(&JordanMap::transpose_map(&alg), &a, &b).unwrap();
        // up = i[(ab)^T - ab] = i[[0,-2],[2,0]], low = i[(ab)^T - ba] = 0
        let expect = AlgebraElement::embed(
            &alg,
            0,
            ComplexMatrix::from_row_major(2, 2, vec![c64(0.0, 0.0), c64(0.0, -2.0), c64(0.0, 2.0), c64(0.0, 0.0)]).unwrap(),
        )
        .unwrap();
        assert!(up.distance(&expect).unwrap() < 1e-14);
        assert!(low.norm() < 1e-14);
        assert!(up.hermitian_deviation() < 1e-14);
    }

    #[test]
    fn identities_hold_for_mixed_symmetry() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let j = JordanMap::from_sa_fn(&alg, |x| {
            AlgebraElement::new(alg.clone(), vec![x.block(0).transpose(), x.block(1).clone()]).unwrap()
        });
        let report = check_herstein_identities(&j, 30, 4);
        assert!(report.passed, "{report:?}");
        assert_eq!(report.checks.len(), IDENTITIES.len());
    }

    #[test]
    fn corrupted_map_violates_iii() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let mut m = DMatrix::identity(4, 4);
        m[(0, 2)] = 0.3;
        let j = JordanMap::new(alg, m).unwrap();
        let report = check_herstein_identities(&j, 10, 0);
        assert!(!report.passed);
        let iii = report.check("iii").unwrap();
        assert!(!iii.passed);
        assert_eq!(iii.witness, Some(0));
    }
}
