// Shared random generators and nalgebra oracles for integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use opline_core::mobius::{a, k, n};
use opline_core::projective::graph_extended;
use opline_core::subspace::orthonormalize;
use opline_core::{
    DenseMatrix, GroupElement, LagrangianPoint, Polarization, Subspace, TolerancePolicy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

pub fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn gaussian(rows: usize, cols: usize, r: &mut impl Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| r.sample(StandardNormal))
}

pub fn gaussian_vec(len: usize, r: &mut impl Rng) -> Vec<f64> {
    (0..len).map(|_| r.sample(StandardNormal)).collect()
}

pub fn random_symmetric(size: usize, r: &mut impl Rng) -> DenseMatrix {
    let g = gaussian(size, size, r);
    (&g + &g.transpose()).scale(0.5)
}

/// Haar-distributed orthogonal matrix from the QR factorisation of a Gaussian.
pub fn random_orthogonal(size: usize, r: &mut impl Rng) -> DenseMatrix {
    let qr = to_na(&gaussian(size, size, r)).qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for j in 0..size {
        if rr[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    from_na(&q)
}

/// `k(θ) a(t) n(s)` with moderate parameters.
pub fn random_group_element(r: &mut impl Rng) -> GroupElement {
    let theta = r.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let t = r.gen_range(-1.0..1.0);
    let s = r.gen_range(-2.0..2.0);
    k(theta).mul(&a(t)).mul(&n(s))
}

pub fn random_polarization(size: usize, r: &mut impl Rng) -> Polarization {
    opline_core::symplectic::build_polarization(
        random_orthogonal(size, r),
        TolerancePolicy::default(),
    )
    .unwrap()
}

pub fn random_subspace(dim: usize, rank: usize, r: &mut impl Rng) -> Subspace {
    orthonormalize(&gaussian(dim, rank, r), &TolerancePolicy::default()).unwrap()
}

pub fn sym_eigenvalues(t: &DenseMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(t))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn sigma_min(t: &DenseMatrix) -> f64 {
    to_na(t).singular_values().min()
}

/// Distinct values with multiplicities, merging within `tol`.
pub fn cluster(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((c, m)) if (v - *c).abs() <= tol => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Symmetric matrix `Q diag(values) Qᵀ` with a random orthogonal `Q`.
pub fn symmetric_with_spectrum(values: &[f64], r: &mut impl Rng) -> DenseMatrix {
    let q = random_orthogonal(values.len(), r);
    &(&q * &DenseMatrix::diag(values)) * &q.transpose()
}

/// Subspace of `M` spanned by the given `x`-block columns.
pub fn in_m(p: &Polarization, cols: &DenseMatrix) -> Subspace {
    if cols.cols() == 0 {
        return Subspace::zero(p.dim());
    }
    let b = DenseMatrix::zeros(p.n(), cols.cols()).vstack(cols);
    orthonormalize(&b, p.policy()).unwrap()
}

/// Random compatible point with random `M00`/`M01` splits. Returns the
/// point and the requested `(dim M00, dim M01)`.
pub fn random_mixed_point(p: &Polarization, r: &mut impl Rng) -> (LagrangianPoint, usize, usize) {
    let nn = p.n();
    let k00 = r.gen_range(0..=nn / 2);
    let k01 = r.gen_range(0..=nn - k00);
    let q = random_orthogonal(nn, r);
    let m00 = in_m(p, &q.submatrix(0, nn, 0, k00));
    let m01 = in_m(p, &q.submatrix(0, nn, k00, k00 + k01));
    let t0 = random_symmetric(nn - k00 - k01, r);
    (graph_extended(p, &t0, &m00, &m01).unwrap(), k00, k01)
}
