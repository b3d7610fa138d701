//! `SL(2,R)` elements, the one-parameter subgroups, and their action on a
//! polarised space, on subspaces and on symmetric operators.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{solve, svd};
use crate::matrix::{norm, DenseMatrix};
use crate::projective::LagrangianPoint;
use crate::subspace::{image, principal_angles, Subspace};
use crate::symplectic::Polarization;

pub const DET_TOL: f64 = 1e-12;

/// A real `2 × 2` matrix `[[a, b], [c, d]]` with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "group element entries must be finite".into(),
            ));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnitDeterminant { det, tol: DET_TOL });
        }
        Ok(Self { a, b, c, d })
    }

    // products and closed-form subgroup matrices are in SL(2,R) by algebra
    fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(1.0, 0.0, 0.0, 1.0)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d, -self.b, -self.c, self.a)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Möbius map on homogeneous coordinates `[x1 : x2]`.
    pub fn apply_projective(&self, p: ProjectivePoint) -> ProjectivePoint {
        let [x1, x2] = p.coords();
        ProjectivePoint::new(self.a * x1 + self.b * x2, self.c * x1 + self.d * x2)
    }
}

/// Point `[x1 : x2]` of the real projective line; `[1 : 0]` is infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint([f64; 2]);

impl ProjectivePoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self([x1, x2])
    }

    pub fn finite(x: f64) -> Self {
        Self([x, 1.0])
    }

    pub fn infinity() -> Self {
        Self([1.0, 0.0])
    }

    pub fn coords(&self) -> [f64; 2] {
        self.0
    }

    /// `true` if `[x1 : x2]` and `[y1 : y2]` coincide up to a relative
    /// cross-product tolerance.
    pub fn same_as(&self, o: &Self, tol: f64) -> bool {
        let [x1, x2] = self.0;
        let [y1, y2] = o.0;
        let cross = x1 * y2 - x2 * y1;
        let scale = libm::hypot(x1, x2) * libm::hypot(y1, y2);
        cross.abs() <= tol * scale
    }
}

/// Rotation `[[cos t, sin t], [−sin t, cos t]]`.
pub fn k(t: f64) -> GroupElement {
    let (s, c) = (libm::sin(t), libm::cos(t));
    GroupElement::raw(c, s, -s, c)
}

/// Shift `[[1, t], [0, 1]]`; fixes only `∞ = [1:0]`.
pub fn n(t: f64) -> GroupElement {
    GroupElement::raw(1.0, t, 0.0, 1.0)
}

/// `[[1, 0], [t, 1]]`; fixes only `0 = [0:1]`.
pub fn n_prime(t: f64) -> GroupElement {
    GroupElement::raw(1.0, 0.0, t, 1.0)
}

/// Dilation `[[e^t, 0], [0, e^{−t}]]`.
pub fn a(t: f64) -> GroupElement {
    GroupElement::raw(libm::exp(t), 0.0, 0.0, libm::exp(-t))
}

/// The parabolic subgroup fixing `[λ:1]`:
/// `[[1 − λt, λ²t], [−t, 1 + λt]] = I + t·X_λ`.
pub fn n_lambda(lambda: f64, t: f64) -> GroupElement {
    GroupElement::raw(1.0 - lambda * t, lambda * lambda * t, -t, 1.0 + lambda * t)
}

/// Nilpotent generator `X_λ = [[−λ, λ²], [−1, λ]]` of [`n_lambda`], as a
/// `(a, b, c, d)` quadruple. `X_λ² = 0`.
pub fn n_lambda_generator(lambda: f64) -> [f64; 4] {
    [-lambda, lambda * lambda, -1.0, lambda]
}

/// Generator `[[0, 1], [0, 0]]` of the shift subgroup [`n`].
pub fn n_generator() -> [f64; 4] {
    [0.0, 1.0, 0.0, 0.0]
}

/// Semigroup fixing `[λ:1]` and `[1:0]`:
/// `[[e^t, λ(e^{−t} − e^t)], [0, e^{−t}]]`, `t > 0`.
pub fn a_lambda(lambda: f64, t: f64) -> Result<GroupElement> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::NonpositiveParameter(t));
    }
    let (ep, em) = (libm::exp(t), libm::exp(-t));
    Ok(GroupElement::raw(ep, lambda * (em - ep), 0.0, em))
}

/// Which named family a [`GroupElement`] was drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubgroupTag {
    K(f64),
    N(f64),
    NPrime(f64),
    A(f64),
    NLambda { lambda: f64, t: f64 },
    ALambda { lambda: f64, t: f64 },
}

impl SubgroupTag {
    pub fn element(&self) -> Result<GroupElement> {
        Ok(match *self {
            SubgroupTag::K(t) => k(t),
            SubgroupTag::N(t) => n(t),
            SubgroupTag::NPrime(t) => n_prime(t),
            SubgroupTag::A(t) => a(t),
            SubgroupTag::NLambda { lambda, t } => n_lambda(lambda, t),
            SubgroupTag::ALambda { lambda, t } => a_lambda(lambda, t)?,
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Block operator `[[a·I, b·U], [c·Uᵀ, d·I]]` for any quadruple; linear in
/// the entries, so it also maps Lie-algebra generators.
pub fn block_operator(p: &Polarization, [ga, gb, gc, gd]: [f64; 4]) -> DenseMatrix {
    let id = DenseMatrix::identity(p.n());
    DenseMatrix::block2x2(
        &id.scale(ga),
        &p.u().scale(gb),
        &p.u().transpose().scale(gc),
        &id.scale(gd),
    )
}

/// The representation `M_U(g)` on `R^(2n)`.
pub fn mu_matrix(p: &Polarization, g: &GroupElement) -> DenseMatrix {
    block_operator(p, g.entries())
}

pub fn act_vector(p: &Polarization, g: &GroupElement, z: &[f64]) -> Result<Vec<f64>> {
    p.check_vector(z)?;
    Ok(mu_matrix(p, g).mul_vec(z))
}

/// `N^g = M_U(g) N`, re-orthonormalised.
pub fn act_subspace(p: &Polarization, g: &GroupElement, s: &Subspace) -> Result<Subspace> {
    p.check_subspace(s)?;
    image(&mu_matrix(p, g), s, p.policy())
}

/// `M_U(g) N` as a [`LagrangianPoint`].
pub fn act_point(
    p: &Polarization,
    g: &GroupElement,
    pt: &LagrangianPoint,
) -> Result<LagrangianPoint> {
    LagrangianPoint::new(p, act_subspace(p, g, pt.space())?)
}

pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-12;

fn check_symmetric_operator(t: &DenseMatrix, tol: f64) -> Result<()> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            expected: t.rows(),
            found: t.cols(),
        });
    }
    let asym = t.asymmetry();
    let bound = tol * t.max_abs().max(1.0);
    if asym > bound {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            tol: bound,
        });
    }
    Ok(())
}

fn fraction_parts(
    g: &GroupElement,
    t: &DenseMatrix,
    floor: f64,
) -> Result<(DenseMatrix, DenseMatrix)> {
    check_symmetric_operator(t, 1e-10)?;
    let id = DenseMatrix::identity(t.rows());
    let num = &t.scale(g.a) + &id.scale(g.b);
    let den = &t.scale(g.c) + &id.scale(g.d);
    let sigma_min = svd(&den).sigma_min();
    if sigma_min <= floor {
        return Err(Error::SingularDenominator { sigma_min, floor });
    }
    Ok((num, den))
}

/// `(aT + bI)(cT + dI)^{-1}`, the order in which graphs transform.
///
/// Errors with [`Error::SingularDenominator`] when `σ_min(cT + dI) ≤ floor`,
/// i.e. `−d/c` sits in the spectrum of `T`.
pub fn linear_fractional_operator(
    g: &GroupElement,
    t: &DenseMatrix,
    floor: f64,
) -> Result<DenseMatrix> {
    let (num, den) = fraction_parts(g, t, floor)?;
    // X = num · den⁻¹  ⇔  denᵀ Xᵀ = numᵀ
    let xt = solve(&den.transpose(), &num.transpose())?.ok_or(Error::SingularDenominator {
        sigma_min: 0.0,
        floor,
    })?;
    Ok(xt.transpose())
}

/// `(cT + dI)^{-1}(aT + bI)`; equal to [`linear_fractional_operator`] for
/// symmetric `T`.
pub fn linear_fractional_operator_left(
    g: &GroupElement,
    t: &DenseMatrix,
    floor: f64,
) -> Result<DenseMatrix> {
    let (num, den) = fraction_parts(g, t, floor)?;
    solve(&den, &num)?.ok_or(Error::SingularDenominator {
        sigma_min: 0.0,
        floor,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitClass {
    /// The orbit is the 2-plane `span{z, W z}`.
    Planar { plane: Subspace },
    /// The orbit spans `{P_M z, U P_M z, P_{M^⊥} z, Uᵀ P_{M^⊥} z}`.
    Generic { spanning: [Vec<f64>; 4] },
}

/// Splits on whether `U P_M z` and `P_{M^⊥} z` are collinear (a zero vector
/// counts as collinear with anything).
pub fn orbit_classify(p: &Polarization, z: &[f64]) -> Result<OrbitClass> {
    p.check_vector(z)?;
    if norm(z) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let nn = p.n();
    let (y, x) = p.split(z);
    let ux = p.u().mul_vec(x);
    let zero = alloc::vec![0.0; nn];
    let pol = p.policy();
    let collinear = if norm(&ux) == 0.0 || norm(y) == 0.0 {
        true
    } else {
        let l1 = Subspace::from_orthonormal(
            DenseMatrix::column_vector(&ux)?.scale(1.0 / norm(&ux)),
            1e-12,
        )?;
        let l2 =
            Subspace::from_orthonormal(DenseMatrix::column_vector(y)?.scale(1.0 / norm(y)), 1e-12)?;
        principal_angles(&l1, &l2)?[0] <= pol.angle_tol
    };
    if collinear {
        let wz = p.w().mul_vec(z);
        let plane =
            crate::subspace::orthonormalize(&DenseMatrix::from_columns(2 * nn, &[z, &wz])?, pol)?;
        return Ok(OrbitClass::Planar { plane });
    }
    let uty = p.u().transpose().mul_vec(y);
    Ok(OrbitClass::Generic {
        spanning: [
            Polarization::join(&zero, x),
            Polarization::join(&ux, &zero),
            Polarization::join(y, &zero),
            Polarization::join(&zero, &uty),
        ],
    })
}
