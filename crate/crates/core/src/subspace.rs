//! Linear subspaces of `R^d` held as orthonormal bases.
//!
//! Rank decisions are relative (`rank_tol * σ_max`); "same direction"
//! decisions go through principal angles compared with `angle_tol`.
//! The zero subspace is an ordinary value: a `d × 0` basis.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::matrix::{norm, sub_vec, DenseMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
    /// Largest principal angle (radians) still read as "the same direction".
    pub angle_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            angle_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rank_tol: f64, angle_tol: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v < 1.0;
        if !ok(rank_tol) {
            return Err(Error::BadTolerance("rank_tol must lie in (0, 1)"));
        }
        if !ok(angle_tol) {
            return Err(Error::BadTolerance("angle_tol must lie in (0, 1)"));
        }
        Ok(Self {
            rank_tol,
            angle_tol,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: DenseMatrix,
    tol: f64,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal within `tol`.
    pub fn from_orthonormal(basis: DenseMatrix, tol: f64) -> Result<Self> {
        if basis.rows() == 0 {
            return Err(Error::EmptyAmbient);
        }
        if basis.cols() > basis.rows() {
            return Err(Error::DimensionMismatch {
                expected: basis.rows(),
                found: basis.cols(),
            });
        }
        let gram = &basis.transpose() * &basis;
        let deviation = gram.max_abs_diff(&DenseMatrix::identity(basis.cols()));
        if deviation > tol {
            return Err(Error::NotOrthonormal { deviation, tol });
        }
        Ok(Self { basis, tol })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            basis: DenseMatrix::zeros(dim, 0),
            tol: TolerancePolicy::default().rank_tol,
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            basis: DenseMatrix::identity(dim),
            tol: TolerancePolicy::default().rank_tol,
        }
    }

    /// Span of the standard basis vectors `e_i`, `i ∈ indices` (0-based).
    pub fn coordinate(dim: usize, indices: &[usize]) -> Self {
        let basis =
            DenseMatrix::from_fn(
                dim,
                indices.len(),
                |i, j| {
                    if indices[j] == i {
                        1.0
                    } else {
                        0.0
                    }
                },
            );
        Self {
            basis,
            tol: TolerancePolicy::default().rank_tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// `d × r` matrix with orthonormal columns.
    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn projector(&self) -> DenseMatrix {
        &self.basis * &self.basis.transpose()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: d,
            });
        }
        Ok(())
    }
}

/// Orthonormal basis of the column space of `vectors`.
pub fn orthonormalize(vectors: &DenseMatrix, policy: &TolerancePolicy) -> Result<Subspace> {
    let d = vectors.rows();
    if d == 0 {
        return Err(Error::EmptyAmbient);
    }
    if !vectors.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    if vectors.cols() == 0 {
        return Ok(Subspace::zero(d));
    }
    let dec = svd(vectors);
    let r = dec.rank(policy.rank_tol).min(d);
    let idx: Vec<usize> = (0..r).collect();
    Ok(Subspace {
        basis: dec.u.select_columns(&idx),
        tol: policy.rank_tol,
    })
}

/// Orthogonal projection of `v` onto `s`.
pub fn project(s: &Subspace, v: &[f64]) -> Result<Vec<f64>> {
    s.check_dim(v.len())?;
    let coeffs = s.basis.transpose().mul_vec(v);
    Ok(s.basis.mul_vec(&coeffs))
}

/// Principal angles in `[0, π/2]`, nondecreasing, `min(r1, r2)` of them.
///
/// Large angles come from the cosines (singular values of `B1^T B2`), small
/// ones from the sines (singular values of the residual of the smaller
/// subspace against the larger), so both ends are accurate.
pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<Vec<f64>> {
    s1.check_dim(s2.ambient_dim())?;
    if s1.is_zero() || s2.is_zero() {
        return Err(Error::EmptySubspace);
    }
    let k = s1.rank().min(s2.rank());
    let overlap = &s1.basis.transpose() * &s2.basis;
    let mut cosines = svd(&overlap).s;
    cosines.truncate(k);
    if cosines.len() < k {
        // overlap is r1 × r2 with r1 < r2: padded values are the zeros
        cosines.resize(k, 0.0);
    }

    let (small, big) = if s2.rank() <= s1.rank() {
        (s2, s1)
    } else {
        (s1, s2)
    };
    let residual = residual_against(small, big);
    let mut sines = svd(&residual).s;
    sines.truncate(k);
    sines.reverse();

    let angles = cosines
        .iter()
        .zip(&sines)
        .map(|(&c, &s)| {
            let c = c.clamp(-1.0, 1.0);
            if c * c >= 0.5 {
                libm::asin(s.clamp(0.0, 1.0))
            } else {
                libm::acos(c)
            }
        })
        .collect();
    Ok(angles)
}

/// `B_small - B_big (B_big^T B_small)`.
fn residual_against(small: &Subspace, big: &Subspace) -> DenseMatrix {
    let coeffs = &big.basis.transpose() * &small.basis;
    &small.basis - &(&big.basis * &coeffs)
}

/// Common directions of `s1` and `s2`: principal vectors whose principal
/// angle is at most `angle_tol`.
pub fn intersect(s1: &Subspace, s2: &Subspace, policy: &TolerancePolicy) -> Result<Subspace> {
    s1.check_dim(s2.ambient_dim())?;
    let d = s1.ambient_dim();
    if s1.is_zero() || s2.is_zero() {
        return Ok(Subspace::zero(d));
    }
    let (small, big) = if s2.rank() <= s1.rank() {
        (s2, s1)
    } else {
        (s1, s2)
    };
    let residual = residual_against(small, big);
    let dec = svd(&residual);
    let sin_tol = libm::sin(policy.angle_tol);
    let idx: Vec<usize> = (0..small.rank()).filter(|&j| dec.s[j] <= sin_tol).collect();
    if idx.is_empty() {
        return Ok(Subspace::zero(d));
    }
    let coords = dec.v.select_columns(&idx);
    let basis = &small.basis * &coords;
    Ok(Subspace {
        basis,
        tol: small.tol.max(big.tol),
    })
}

/// `S^⊥` in the ambient space.
pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    let d = s.ambient_dim();
    if s.is_zero() {
        return Subspace::full(d);
    }
    // null space of B^T; its nonzero singular values are all 1
    let dec = svd(&s.basis.transpose());
    let idx: Vec<usize> = (0..d).filter(|&j| dec.s[j] < 0.5).collect();
    Subspace {
        basis: dec.v.select_columns(&idx),
        tol: s.tol,
    }
}

/// Null space of `a` (as a subspace of `R^cols`), with singular values below
/// `rank_tol * σ_max` counted as zero.
pub fn null_space(a: &DenseMatrix, policy: &TolerancePolicy) -> Result<Subspace> {
    let n = a.cols();
    if n == 0 {
        return Err(Error::EmptyAmbient);
    }
    if a.rows() == 0 {
        return Ok(Subspace::full(n));
    }
    let dec = svd(a);
    let r = dec.rank(policy.rank_tol);
    let idx: Vec<usize> = (r..n).collect();
    Ok(Subspace {
        basis: dec.v.select_columns(&idx),
        tol: policy.rank_tol,
    })
}

/// Orthogonal complement of `inner` within `outer` (`outer ∩ inner^⊥`).
pub fn relative_complement(
    outer: &Subspace,
    inner: &Subspace,
    policy: &TolerancePolicy,
) -> Result<Subspace> {
    intersect(outer, &orthogonal_complement(inner), policy)
}

/// Image of `s` under the linear map `a`.
pub fn image(a: &DenseMatrix, s: &Subspace, policy: &TolerancePolicy) -> Result<Subspace> {
    if a.cols() != s.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim(),
            found: a.cols(),
        });
    }
    if s.is_zero() {
        return Ok(Subspace::zero(a.rows()));
    }
    orthonormalize(&(a * &s.basis), policy)
}

pub fn subspace_sum(s1: &Subspace, s2: &Subspace, policy: &TolerancePolicy) -> Result<Subspace> {
    s1.check_dim(s2.ambient_dim())?;
    orthonormalize(&s1.basis.hstack(&s2.basis), policy)
}

/// Equal rank and every principal angle within `angle_tol`.
pub fn subspace_equal(s1: &Subspace, s2: &Subspace, policy: &TolerancePolicy) -> Result<bool> {
    s1.check_dim(s2.ambient_dim())?;
    if s1.rank() != s2.rank() {
        return Ok(false);
    }
    if s1.is_zero() {
        return Ok(true);
    }
    Ok(principal_angles(s1, s2)?
        .iter()
        .all(|&a| a <= policy.angle_tol))
}

/// `‖v − P_S v‖ ≤ angle_tol · ‖v‖`.
pub fn contains(s: &Subspace, v: &[f64], policy: &TolerancePolicy) -> Result<bool> {
    let p = project(s, v)?;
    Ok(norm(&sub_vec(v, &p)) <= policy.angle_tol * norm(v))
}
