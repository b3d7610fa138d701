mod common;

use common::*;
use opline_core::linalg::svd;
use opline_core::subspace::{
    contains, intersect, null_space, orthogonal_complement, principal_angles, project,
    subspace_equal, subspace_sum,
};
use opline_core::{DenseMatrix, TolerancePolicy};
use proptest::prelude::*;

fn orthonormality_defect(s: &opline_core::Subspace) -> f64 {
    let b = s.basis();
    (&b.transpose() * b).max_abs_diff(&DenseMatrix::identity(s.rank()))
}

#[test]
fn svd_singular_values_match_nalgebra() {
    let mut r = rng(11);
    for (m, n) in [(3, 3), (7, 4), (4, 7), (12, 12), (20, 9)] {
        let a = gaussian(m, n, &mut r);
        let mut want: Vec<f64> = to_na(&a).singular_values().iter().copied().collect();
        want.sort_by(|x, y| y.total_cmp(x));
        let got = svd(&a).s;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12 * want[0], "{m}x{n}: {g} vs {w}");
        }
    }
}

#[test]
fn rank_matches_nalgebra_on_low_rank_products() {
    let mut r = rng(12);
    let pol = TolerancePolicy::default();
    for rank in 0..6 {
        let a = &gaussian(9, rank, &mut r) * &gaussian(rank, 7, &mut r);
        let want = to_na(&a).rank(1e-10 * to_na(&a).norm().max(1.0));
        assert_eq!(want, rank);
        assert_eq!(svd(&a).rank(pol.rank_tol), rank);
        assert_eq!(null_space(&a, &pol).unwrap().rank(), 7 - rank);
    }
}

#[test]
fn principal_angles_match_nalgebra_oracle() {
    let mut r = rng(13);
    for _ in 0..20 {
        let s1 = random_subspace(10, 3, &mut r);
        let s2 = random_subspace(10, 4, &mut r);
        let overlap = to_na(&(&s1.basis().transpose() * s2.basis()));
        let mut want: Vec<f64> = overlap
            .singular_values()
            .iter()
            .map(|c| c.min(1.0).acos())
            .collect();
        want.sort_by(f64::total_cmp);
        let got = principal_angles(&s1, &s2).unwrap();
        assert_eq!(got.len(), 3);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_formula(seed in any::<u64>(), d in 2usize..=20, r1 in 0usize..=20, r2 in 0usize..=20, shared in 0usize..=5) {
        let mut r = rng(seed);
        let pol = TolerancePolicy::default();
        let r1 = r1.min(d);
        let r2 = r2.min(d);
        let shared = shared.min(r1).min(r2);
        // force a known overlap on top of the generic one
        let common_part = gaussian(d, shared, &mut r);
        let b1 = common_part.hstack(&gaussian(d, r1 - shared, &mut r));
        let b2 = common_part.hstack(&gaussian(d, r2 - shared, &mut r));
        let s1 = opline_core::subspace::orthonormalize(&b1, &pol).unwrap();
        let s2 = opline_core::subspace::orthonormalize(&b2, &pol).unwrap();
        let cap = intersect(&s1, &s2, &pol).unwrap();
        let sum = subspace_sum(&s1, &s2, &pol).unwrap();
        prop_assert_eq!(cap.rank() + sum.rank(), s1.rank() + s2.rank());
        prop_assert_eq!(sum.rank(), (r1 + r2 - shared).min(d));
        for s in [&s1, &s2, &cap, &sum] {
            prop_assert!(orthonormality_defect(s) <= s.tol());
        }
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>(), d in 1usize..=16, rank in 0usize..=16) {
        let mut r = rng(seed);
        let s = random_subspace(d, rank.min(d), &mut r);
        let c = orthogonal_complement(&s);
        prop_assert_eq!(c.rank(), d - s.rank());
        prop_assert!((&s.basis().transpose() * c.basis()).max_abs() < 1e-12);
        let cc = orthogonal_complement(&c);
        prop_assert!(subspace_equal(&cc, &s, &TolerancePolicy::default()).unwrap());
    }

    #[test]
    fn angles_are_symmetric(seed in any::<u64>(), d in 2usize..=12, rank in 1usize..=6) {
        let mut r = rng(seed);
        let rank = rank.min(d);
        let s1 = random_subspace(d, rank, &mut r);
        let s2 = random_subspace(d, rank, &mut r);
        let a12 = principal_angles(&s1, &s2).unwrap();
        let a21 = principal_angles(&s2, &s1).unwrap();
        for (x, y) in a12.iter().zip(&a21) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), d in 1usize..=15, rank in 0usize..=15) {
        let mut r = rng(seed);
        let s = random_subspace(d, rank.min(d), &mut r);
        let v = gaussian_vec(d, &mut r);
        let pv = project(&s, &v).unwrap();
        let ppv = project(&s, &pv).unwrap();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff = pv.iter().zip(&ppv).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12 * nv.max(1.0));
        prop_assert!(contains(&s, &pv, &TolerancePolicy::default()).unwrap() || s.is_zero());
    }
}
