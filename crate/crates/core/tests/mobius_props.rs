mod common;

use common::*;
use opline_core::linalg::svd;
use opline_core::mobius::{
    a, a_lambda, act_point, act_subspace, act_vector, k, linear_fractional_operator,
    linear_fractional_operator_left, mu_matrix, n, n_lambda, n_prime, orbit_classify, OrbitClass,
    DEFAULT_DENOMINATOR_FLOOR,
};
use opline_core::projective::{extract_operator, graph_of_operator};
use opline_core::subspace::{contains, orthonormalize};
use opline_core::symplectic::{is_lagrangian, omega};
use opline_core::{DenseMatrix, Error, GroupElement, Polarization};
use proptest::prelude::*;

#[test]
fn parabolic_subgroup_is_a_conjugated_lower_shift() {
    // with tan θ = λ the rotation k(θ) carries 0 = [0:1] to [λ:1]
    for &lambda in &[-3.0, -0.4, 0.0, 0.7, 2.5] {
        let theta: f64 = f64::atan(lambda);
        for &t in &[-1.3, 0.2, 2.0] {
            let conj = k(theta)
                .mul(&n_prime(-t * (1.0 + lambda * lambda)))
                .mul(&k(-theta));
            assert!(conj.max_abs_diff(&n_lambda(lambda, t)) < 1e-12);
        }
    }
}

#[test]
fn rotation_reduces_the_eigen_condition_to_a_kernel() {
    // the M⊥ block of M_U(k(−θ)) z is cos θ · (y − λ U x)
    let mut r = rng(41);
    let p = random_polarization(3, &mut r);
    for &lambda in &[-2.0, 0.5, 4.0] {
        let theta = f64::atan(lambda);
        let z = gaussian_vec(6, &mut r);
        let moved = act_vector(&p, &k(-theta), &z).unwrap();
        let (y, x) = p.split(&z);
        let ux = p.u().mul_vec(x);
        for i in 0..3 {
            let want = theta.cos() * (y[i] - lambda * ux[i]);
            assert!((moved[i] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn dilation_semigroup_is_shift_conjugated() {
    for &lambda in &[-1.5, 0.0, 3.0] {
        for &t in &[0.1, 1.0, 4.0] {
            let conj = n(lambda).mul(&a(t)).mul(&n(-lambda));
            assert!(conj.max_abs_diff(&a_lambda(lambda, t).unwrap()) < 1e-9 * t.exp());
        }
    }
}

#[test]
fn fractional_map_rejects_spectrum_hits() {
    let t = DenseMatrix::diag(&[1.0, 2.0]);
    // c T + d I with −d/c = 2
    let g = GroupElement::new(0.0, -1.0, 1.0, -2.0).unwrap();
    assert!(matches!(
        linear_fractional_operator(&g, &t, DEFAULT_DENOMINATOR_FLOOR),
        Err(Error::SingularDenominator { .. })
    ));
}

fn orbit_rank(p: &Polarization, z: &[f64], r: &mut impl rand::Rng) -> (DenseMatrix, usize) {
    let cols: Vec<Vec<f64>> = (0..50)
        .map(|_| act_vector(p, &random_group_element(r), z).unwrap())
        .collect();
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let m = DenseMatrix::from_columns(p.dim(), &refs).unwrap();
    let s = svd(&m.transpose()).s;
    let rank = s.iter().filter(|&&v| v > 1e-6).count();
    (m, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn representation_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=16) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let g1 = random_group_element(&mut r);
        let g2 = random_group_element(&mut r);
        let lhs = &mu_matrix(&p, &g1) * &mu_matrix(&p, &g2);
        prop_assert!(lhs.max_abs_diff(&mu_matrix(&p, &g1.mul(&g2))) <= 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn form_is_invariant(seed in any::<u64>(), n in 1usize..=10) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let g = random_group_element(&mut r);
        let z1 = gaussian_vec(2 * n, &mut r);
        let z2 = gaussian_vec(2 * n, &mut r);
        let before = omega(&p, &z1, &z2).unwrap();
        let after = omega(&p, &act_vector(&p, &g, &z1).unwrap(), &act_vector(&p, &g, &z2).unwrap()).unwrap();
        prop_assert!((after - before).abs() <= 1e-10 * (1.0 + before.abs()));
    }

    #[test]
    fn action_preserves_lagrangians(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let (pt, _, _) = random_mixed_point(&p, &mut r);
        let g = random_group_element(&mut r);
        let moved = act_subspace(&p, &g, pt.space()).unwrap();
        prop_assert!(is_lagrangian(&p, &moved).unwrap());
    }

    #[test]
    fn graphs_transform_by_fractional_maps(seed in any::<u64>(), n in 1usize..=10) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let t = random_symmetric(n, &mut r);
        let g = random_group_element(&mut r);
        let den = &t.scale(g.c()) + &DenseMatrix::identity(n).scale(g.d());
        prop_assume!(sigma_min(&den) > 1e-3);
        let right = linear_fractional_operator(&g, &t, DEFAULT_DENOMINATOR_FLOOR).unwrap();
        let left = linear_fractional_operator_left(&g, &t, DEFAULT_DENOMINATOR_FLOOR).unwrap();
        prop_assert!(right.max_abs_diff(&left) <= 1e-8 * right.max_abs().max(1.0));
        let moved = act_point(&p, &g, &graph_of_operator(&p, &t).unwrap()).unwrap();
        let extracted = extract_operator(&p, &moved).unwrap().t_hat;
        prop_assert!(extracted.max_abs_diff(&right) <= 1e-8 * right.max_abs().max(1.0));

        // spectral covariance against the nalgebra eigensolver
        let mut want: Vec<f64> = sym_eigenvalues(&t)
            .iter()
            .map(|l| (g.a() * l + g.b()) / (g.c() * l + g.d()))
            .collect();
        want.sort_by(f64::total_cmp);
        let got = sym_eigenvalues(&right.symmetric_part());
        for (x, y) in got.iter().zip(&want) {
            prop_assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0));
        }
    }

    #[test]
    fn planar_orbits_stay_in_their_plane(seed in any::<u64>(), n in 1usize..=6, mu in -3.0f64..3.0) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let x = gaussian_vec(n, &mut r);
        let z = Polarization::join(&p.u().mul_vec(&x).iter().map(|v| mu * v).collect::<Vec<_>>(), &x);
        let plane = match orbit_classify(&p, &z).unwrap() {
            OrbitClass::Planar { plane } => plane,
            other => return Err(TestCaseError::fail(format!("expected planar, got {other:?}"))),
        };
        prop_assert_eq!(plane.rank(), 2);
        for _ in 0..50 {
            let gz = act_vector(&p, &random_group_element(&mut r), &z).unwrap();
            prop_assert!(contains(&plane, &gz, p.policy()).unwrap());
        }
    }

    #[test]
    fn generic_orbits_span_four_directions(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let p = random_polarization(n, &mut r);
        let z = gaussian_vec(2 * n, &mut r);
        let spanning = match orbit_classify(&p, &z).unwrap() {
            OrbitClass::Generic { spanning } => spanning,
            other => return Err(TestCaseError::fail(format!("expected generic, got {other:?}"))),
        };
        let refs: Vec<&[f64]> = spanning.iter().map(|c| c.as_slice()).collect();
        let span = orthonormalize(&DenseMatrix::from_columns(2 * n, &refs).unwrap(), p.policy()).unwrap();
        prop_assert_eq!(span.rank(), 4);
        let (samples, rank) = orbit_rank(&p, &z, &mut r);
        prop_assert_eq!(rank, 4);
        for j in 0..samples.cols() {
            prop_assert!(contains(&span, &samples.column(j), p.policy()).unwrap());
        }
    }
}
