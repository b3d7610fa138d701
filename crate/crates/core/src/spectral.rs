//! Spectral probes driven by subgroup actions on a Lagrangian point.
//!
//! * Eigenvalues: `λ` is an eigenvalue iff the subspace of `N` fixed by the
//!   whole subgroup `N_λ` is nonzero. Since `n_lambda(λ, t) = I + t·X_λ`
//!   with `X_λ² = 0`, a vector stays in every `N^g` iff `z ∈ N` and
//!   `X̂_λ z ∈ N`, which is a null-space problem.
//! * Infinity: the same test with the shift subgroup, whose fixed part is
//!   `N_∞ = N ∩ M^⊥`.
//! * Resolvent distance: the semigroup `A_λ` pushes `N` away from its
//!   ε-adjunct neighbourhood at a rate governed by `σ_min(T − λ)`; the
//!   largest `t` at which they still meet gives `σ_min = ε / (e^{2t} − 1)`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{pinv, solve, svd};
use crate::matrix::{norm, sub_vec, DenseMatrix};
use crate::mobius::{block_operator, mu_matrix, n, n_generator, n_lambda_generator};
use crate::projective::LagrangianPoint;
use crate::subspace::{orthonormalize, subspace_equal, Subspace};
use crate::symplectic::Polarization;

/// An eigenvalue on the projective line: finite `[λ:1]` or `[1:0]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eigenvalue {
    Finite(f64),
    Infinity,
}

impl Eigenvalue {
    pub fn homogeneous(&self) -> [f64; 2] {
        match *self {
            Eigenvalue::Finite(l) => [l, 1.0],
            Eigenvalue::Infinity => [1.0, 0.0],
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Eigenvalue::Finite(l) => Some(l),
            Eigenvalue::Infinity => None,
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Finite(l) => write!(f, "{l}"),
            Eigenvalue::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    pub lambda: Eigenvalue,
    /// Eigenvectors as ambient vectors: `P_M` of the fixed subspace for a
    /// finite value, the fixed subspace itself (inside `M^⊥`) for infinity.
    pub eigenspace: Subspace,
    /// The common fixed subspace inside `N`.
    pub fixed: Subspace,
    pub multiplicity: usize,
}

/// `{z ∈ N : X̂ z ∈ N}` for the block operator `X̂` of a nilpotent generator.
fn generator_fixed_subspace(
    p: &Polarization,
    pt: &LagrangianPoint,
    generator: [f64; 4],
) -> Result<Subspace> {
    p.check_subspace(pt.space())?;
    let b = pt.space().basis();
    let xb = &block_operator(p, generator) * b;
    let off = &xb - &(b * &(&b.transpose() * &xb));
    let scale = libm::sqrt(generator.iter().map(|v| v * v).sum::<f64>());
    let dec = svd(&off);
    let thresh = p.policy().rank_tol * scale;
    let idx: Vec<usize> = (0..b.cols()).filter(|&j| dec.s[j] <= thresh).collect();
    if idx.is_empty() {
        return Ok(Subspace::zero(p.dim()));
    }
    Subspace::from_orthonormal(b * &dec.v.select_columns(&idx), 1e-10)
}

/// `∩_{g ∈ N_λ} N^g`.
pub fn nlambda_fixed_subspace(
    p: &Polarization,
    pt: &LagrangianPoint,
    lambda: f64,
) -> Result<Subspace> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "λ must be finite, got {lambda}"
        )));
    }
    generator_fixed_subspace(p, pt, n_lambda_generator(lambda))
}

/// `∩_{g ∈ N} N^g` for the shift subgroup; equals `N_∞`.
pub fn infinity_fixed_subspace(p: &Polarization, pt: &LagrangianPoint) -> Result<Subspace> {
    generator_fixed_subspace(p, pt, n_generator())
}

/// Report for `λ` if the `N_λ`-fixed subspace is nonzero.
///
/// The certificate check `‖P_{M^⊥} z − λ U P_M z‖` uses `√rank_tol` because
/// the generator residual is quadratic in the distance to the eigenvalue.
pub fn is_eigenvalue(
    p: &Polarization,
    pt: &LagrangianPoint,
    lambda: f64,
) -> Result<Option<EigenReport>> {
    let fixed = nlambda_fixed_subspace(p, pt, lambda)?;
    if fixed.is_zero() {
        return Ok(None);
    }
    let b = fixed.basis();
    let (y, x) = (p.y_block(b), p.x_block(b));
    let resid = (&y - &(p.u() * &x).scale(lambda)).max_abs();
    let tol = 2.0 * libm::sqrt(p.policy().rank_tol) * (1.0 + lambda * lambda);
    if resid > tol {
        return Err(Error::ResidualCheck {
            residual: resid,
            tol,
        });
    }
    let projected = DenseMatrix::zeros(p.n(), b.cols()).vstack(&x);
    let eigenspace = orthonormalize(&projected, p.policy())?;
    Ok(Some(EigenReport {
        lambda: Eigenvalue::Finite(lambda),
        multiplicity: fixed.rank(),
        eigenspace,
        fixed,
    }))
}

pub fn infinity_eigen_test(p: &Polarization, pt: &LagrangianPoint) -> Result<Option<EigenReport>> {
    let fixed = infinity_fixed_subspace(p, pt)?;
    if fixed.is_zero() {
        return Ok(None);
    }
    let x = p.x_block(fixed.basis());
    let resid = x.max_abs();
    let tol = libm::sqrt(p.policy().rank_tol);
    if resid > tol {
        return Err(Error::ResidualCheck {
            residual: resid,
            tol,
        });
    }
    Ok(Some(EigenReport {
        lambda: Eigenvalue::Infinity,
        multiplicity: fixed.rank(),
        eigenspace: fixed.clone(),
        fixed,
    }))
}

/// Runs [`is_eigenvalue`] over a grid (sorted, near-duplicates dropped) and
/// then [`infinity_eigen_test`]. Infinite grid entries are accepted and
/// ignored: the infinity test always runs.
pub fn eigen_sweep(
    p: &Polarization,
    pt: &LagrangianPoint,
    grid: &[f64],
) -> Result<Vec<EigenReport>> {
    if grid.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("grid contains NaN".into()));
    }
    let mut values: Vec<f64> = grid.iter().copied().filter(|v| v.is_finite()).collect();
    values.sort_by(f64::total_cmp);
    let tol = p.policy().angle_tol;
    values.dedup_by(|b, a| (*b - *a).abs() <= tol * a.abs().max(1.0));

    let mut reports: Vec<EigenReport> = Vec::new();
    for lambda in values {
        if let Some(r) = is_eigenvalue(p, pt, lambda)? {
            if let Some(prev) = reports.last() {
                if subspace_equal(&prev.fixed, &r.fixed, p.policy())? {
                    continue;
                }
            }
            reports.push(r);
        }
    }
    if let Some(r) = infinity_eigen_test(p, pt)? {
        reports.push(r);
    }
    Ok(reports)
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadEpsilon(eps));
    }
    Ok(())
}

/// Whether `z = w + y` with `w ∈ N`, `y ∈ M^⊥` and `‖y‖ < ε ‖P_M w‖`.
///
/// `P_M w = P_M z` is forced; `w` is lifted through the chart
/// `N_0 ⊕ N_1 → M`, and any `N_∞` component is spent on shrinking `y`.
pub fn adjunct_contains(
    p: &Polarization,
    pt: &LagrangianPoint,
    eps: f64,
    z: &[f64],
) -> Result<bool> {
    check_epsilon(eps)?;
    p.check_vector(z)?;
    p.check_subspace(pt.space())?;
    if norm(z) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let (yz, xz) = p.split(z);
    let xnorm = norm(xz);
    if xnorm == 0.0 {
        return Ok(false);
    }
    let chart = pt.n0().basis().hstack(pt.n1().basis());
    let (yh, xh) = (p.y_block(&chart), p.x_block(&chart));
    let coeffs = pinv(&xh, p.policy().rank_tol).mul_vec(xz);
    let residual = norm(&sub_vec(&xh.mul_vec(&coeffs), xz));
    if residual > p.policy().angle_tol * xnorm {
        return Err(Error::ChartDegenerate {
            ninf_dim: pt.n_inf().rank(),
            residual,
        });
    }
    let mut y = sub_vec(yz, &yh.mul_vec(&coeffs));
    if !pt.n_inf().is_zero() {
        let yinf = p.y_block(pt.n_inf().basis());
        let along = yinf.mul_vec(&yinf.transpose().mul_vec(&y));
        y = sub_vec(&y, &along);
    }
    Ok(norm(&y) < eps * xnorm)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeResult {
    pub lambda: f64,
    pub epsilon: f64,
    /// Supremum of semigroup parameters at which `N^{a(t)}` still meets the
    /// ε-adjunct neighbourhood (of the graph of `T − λ`).
    pub t_star: f64,
    /// `ε / (e^{2 t_star} − 1)`, an estimate of `σ_min(T − λ)`.
    pub sigma_est: f64,
    /// `t_star` reached `t_max`: `λ` is an eigenvalue to working precision.
    pub saturated: bool,
}

impl ProbeResult {
    pub fn status(&self) -> &'static str {
        if self.saturated {
            "saturated"
        } else {
            "ok"
        }
    }
}

/// Ratio matrix `R` with `‖y‖ = ‖R P_M z'‖` for `z' ∈ N'`, where `y` is the
/// `M^⊥` gap between `z'` and the point of `N` over the same `M` component.
/// Both bases must have invertible `x` blocks.
fn adjunct_gap(p: &Polarization, base: &DenseMatrix, moved: &DenseMatrix) -> Result<DenseMatrix> {
    let slope = |b: &DenseMatrix| -> Result<DenseMatrix> {
        // Y X⁻¹ = (X⁻ᵀ Yᵀ)ᵀ
        let xt = p.x_block(b).transpose();
        let yt = p.y_block(b).transpose();
        solve(&xt, &yt)?
            .map(|s| s.transpose())
            .ok_or(Error::NontrivialNInfinity(1))
    };
    Ok(&slope(moved)? - &slope(base)?)
}

/// Distance-to-spectrum probe for `T − λ` via the semigroup `A_λ`.
///
/// `N` is first shifted by `n(−λ)` so it becomes the graph of `T − λ`; then
/// `t_star` is bracketed by bisection on `(0, t_max]` down to `bisect_tol`.
pub fn resolvent_probe(
    p: &Polarization,
    pt: &LagrangianPoint,
    lambda: f64,
    eps: f64,
    t_max: f64,
    bisect_tol: f64,
) -> Result<ProbeResult> {
    check_epsilon(eps)?;
    p.check_subspace(pt.space())?;
    if !pt.n_inf().is_zero() {
        return Err(Error::NontrivialNInfinity(pt.n_inf().rank()));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "λ must be finite, got {lambda}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if bisect_tol.is_nan() || bisect_tol <= 0.0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "bisect_tol must be positive, got {bisect_tol}"
        )));
    }
    let base = &mu_matrix(p, &n(-lambda)) * pt.space().basis();
    let rank_tol = p.policy().rank_tol;
    let meets = |t: f64| -> Result<bool> {
        let moved = &mu_matrix(p, &crate::mobius::a(t)) * &base;
        let dec = svd(&adjunct_gap(p, &base, &moved)?);
        let (smin, smax) = (dec.sigma_min(), dec.sigma_max());
        Ok(smin < eps || smin <= rank_tol * smax)
    };

    let finish = |t_star: f64, saturated: bool| ProbeResult {
        lambda,
        epsilon: eps,
        t_star,
        sigma_est: eps / libm::expm1(2.0 * t_star),
        saturated,
    };
    if meets(t_max)? {
        return Ok(finish(t_max, true));
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo > bisect_tol {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(finish(0.5 * (lo + hi), false))
}
