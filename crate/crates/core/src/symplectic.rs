//! Polarised symplectic structure on `R^(2n)`.
//!
//! Coordinates are `z = (y, x)`: the first `n` entries are the `M^⊥`
//! component `y`, the last `n` entries the `M` component `x`. The reference
//! Lagrangian is `M = span(e_{n+1}, …, e_{2n})` and the isometry
//! `U: M → M^⊥` is an orthogonal `n × n` matrix. With
//!
//! ```text
//! W = [[0, U], [-Uᵀ, 0]],      ω(z, z') = ⟨W z, z'⟩ = ⟨U x, y'⟩ − ⟨Uᵀ y, x'⟩
//! ```
//!
//! the form matrix `Ω` returned by [`Polarization::omega_matrix`] is `W`
//! itself, so `ω(z, z') = (Ω z)ᵀ z'`; for `n = 1, U = 1` it is the matrix
//! `J = [[0, 1], [-1, 0]]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{solve, svd};
use crate::matrix::DenseMatrix;
use crate::subspace::{orthogonal_complement, orthonormalize, Subspace, TolerancePolicy};

#[derive(Clone, Debug, PartialEq)]
pub struct Polarization {
    n: usize,
    u: DenseMatrix,
    w: DenseMatrix,
    policy: TolerancePolicy,
}

/// Validates that `u` is orthogonal and builds the polarisation it induces.
pub fn build_polarization(u: DenseMatrix, policy: TolerancePolicy) -> Result<Polarization> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            found: u.cols(),
        });
    }
    let n = u.rows();
    if n == 0 {
        return Err(Error::EmptyAmbient);
    }
    if !u.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let id = DenseMatrix::identity(n);
    let deviation = (&u.transpose() * &u)
        .max_abs_diff(&id)
        .max((&u * &u.transpose()).max_abs_diff(&id));
    if deviation > policy.rank_tol {
        return Err(Error::NotOrthogonal {
            deviation,
            tol: policy.rank_tol,
        });
    }
    let zero = DenseMatrix::zeros(n, n);
    let w = DenseMatrix::block2x2(&zero, &u, &-&u.transpose(), &zero);
    Ok(Polarization { n, u, w, policy })
}

impl Polarization {
    /// `U = I_n`.
    pub fn standard(n: usize) -> Result<Self> {
        build_polarization(DenseMatrix::identity(n), TolerancePolicy::default())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn w(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn omega_matrix(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn policy(&self) -> &TolerancePolicy {
        &self.policy
    }

    pub fn with_policy(mut self, policy: TolerancePolicy) -> Self {
        self.policy = policy;
        self
    }

    /// The reference Lagrangian `M`.
    pub fn m(&self) -> Subspace {
        let idx: Vec<usize> = (self.n..2 * self.n).collect();
        Subspace::coordinate(2 * self.n, &idx)
    }

    pub fn m_perp(&self) -> Subspace {
        let idx: Vec<usize> = (0..self.n).collect();
        Subspace::coordinate(2 * self.n, &idx)
    }

    /// `(y, x) ↦ (U x, 0)`: the isometry applied to the `M` component.
    pub fn u_embedded(&self) -> DenseMatrix {
        let zero = DenseMatrix::zeros(self.n, self.n);
        DenseMatrix::block2x2(&zero, &self.u, &zero, &zero)
    }

    /// `(y, x) ↦ (0, Uᵀ y)`.
    pub fn u_adjoint_embedded(&self) -> DenseMatrix {
        let zero = DenseMatrix::zeros(self.n, self.n);
        DenseMatrix::block2x2(&zero, &zero, &self.u.transpose(), &zero)
    }

    pub fn check_vector(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: z.len(),
            });
        }
        Ok(())
    }

    pub fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Splits `z` into its `(y, x)` blocks.
    pub fn split<'a>(&self, z: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        z.split_at(self.n)
    }

    pub fn join(y: &[f64], x: &[f64]) -> Vec<f64> {
        let mut z = y.to_vec();
        z.extend_from_slice(x);
        z
    }

    /// Rows `0..n` (`y` block) of a `2n × k` matrix.
    pub fn y_block(&self, b: &DenseMatrix) -> DenseMatrix {
        b.submatrix(0, self.n, 0, b.cols())
    }

    /// Rows `n..2n` (`x` block) of a `2n × k` matrix.
    pub fn x_block(&self, b: &DenseMatrix) -> DenseMatrix {
        b.submatrix(self.n, 2 * self.n, 0, b.cols())
    }
}

/// Exchanges the two halves of a vector: converts between the `(y, x)`
/// convention and listings that put the `M` block first.
pub fn swap_halves(v: &[f64]) -> Vec<f64> {
    let h = v.len() / 2;
    let mut out = v[h..].to_vec();
    out.extend_from_slice(&v[..h]);
    out
}

pub fn omega(p: &Polarization, z1: &[f64], z2: &[f64]) -> Result<f64> {
    p.check_vector(z1)?;
    p.check_vector(z2)?;
    let wz = p.w.mul_vec(z1);
    Ok(wz.iter().zip(z2).map(|(a, b)| a * b).sum())
}

/// `max |Bᵀ Ω B|` over the orthonormal basis `B` of `s`.
pub fn isotropy_defect(p: &Polarization, s: &Subspace) -> Result<f64> {
    p.check_subspace(s)?;
    let b = s.basis();
    Ok((&b.transpose() * &(&p.w * b)).max_abs())
}

pub fn is_isotropic(p: &Polarization, s: &Subspace) -> Result<bool> {
    Ok(isotropy_defect(p, s)? <= p.policy.angle_tol)
}

/// Isotropic and of rank `n`.
pub fn is_lagrangian(p: &Polarization, s: &Subspace) -> Result<bool> {
    Ok(s.rank() == p.n && is_isotropic(p, s)?)
}

pub(crate) fn require_lagrangian(p: &Polarization, s: &Subspace) -> Result<()> {
    let defect = isotropy_defect(p, s)?;
    if s.rank() != p.n || defect > p.policy.angle_tol {
        return Err(Error::NotLagrangian {
            rank: s.rank(),
            n: p.n,
            defect,
            tol: p.policy.angle_tol,
        });
    }
    Ok(())
}

/// `{z : ω(z, s) = 0 for all s ∈ S}`.
pub fn symplectic_complement(p: &Polarization, s: &Subspace) -> Result<Subspace> {
    p.check_subspace(s)?;
    // ω(z, s) = zᵀ Ωᵀ s, so the complement is (Ωᵀ S)^⊥; Ω is orthogonal
    let image = orthonormalize(&(&p.w.transpose() * s.basis()), &p.policy)?;
    Ok(orthogonal_complement(&image))
}

/// A polarisation recovered from a form, together with the orthonormal
/// frame `[B_{M^⊥} | B_M]` in which it is expressed.
#[derive(Clone, Debug)]
pub struct AdaptedPolarization {
    pub polarization: Polarization,
    /// `2n × 2n` orthogonal matrix whose columns are the `M^⊥` basis
    /// followed by the `M` basis.
    pub frame: DenseMatrix,
}

impl AdaptedPolarization {
    /// The isometry as an ambient map `M → M^⊥` (zero on `M^⊥`).
    pub fn ambient_u(&self) -> DenseMatrix {
        let n = self.polarization.n;
        let bp = self.frame.submatrix(0, 2 * n, 0, n);
        let bm = self.frame.submatrix(0, 2 * n, n, 2 * n);
        &(&bp * self.polarization.u()) * &bm.transpose()
    }

    /// The form matrix expressed back in ambient coordinates.
    pub fn ambient_omega(&self) -> DenseMatrix {
        &(&self.frame * self.polarization.omega_matrix()) * &self.frame.transpose()
    }
}

/// Recovers the isometry `U: M → M^⊥` defined by `⟨z, x⟩ = ω(z, U x)` for
/// all `z ∈ M`, and checks that it is unitary.
pub fn u_from_omega(
    omega_matrix: &DenseMatrix,
    m: &Subspace,
    policy: &TolerancePolicy,
) -> Result<AdaptedPolarization> {
    let d = omega_matrix.rows();
    if !omega_matrix.is_square() || !d.is_multiple_of(2) || d == 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "form matrix must be square of even size, got {}x{}",
            omega_matrix.rows(),
            omega_matrix.cols()
        )));
    }
    if m.ambient_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.ambient_dim(),
        });
    }
    let n = d / 2;
    let scale = omega_matrix.max_abs().max(1.0);
    let skew_dev = (omega_matrix + &omega_matrix.transpose()).max_abs();
    if skew_dev > policy.rank_tol * scale {
        return Err(Error::NotSkew {
            deviation: skew_dev,
            tol: policy.rank_tol * scale,
        });
    }
    let dec = svd(omega_matrix);
    let ratio = if dec.sigma_max() > 0.0 {
        dec.sigma_min() / dec.sigma_max()
    } else {
        0.0
    };
    if ratio <= policy.rank_tol {
        return Err(Error::DegenerateForm {
            ratio,
            tol: policy.rank_tol,
        });
    }
    let bm = m.basis();
    let defect = (&bm.transpose() * &(omega_matrix * bm)).max_abs();
    if m.rank() != n || defect > policy.angle_tol * scale {
        return Err(Error::NotLagrangian {
            rank: m.rank(),
            n,
            defect,
            tol: policy.angle_tol * scale,
        });
    }
    let mperp = orthogonal_complement(m);
    let bp = mperp.basis();
    // ⟨B_M e_i, B_M ξ⟩ = ω(B_M e_i, B_P η) = (Ω B_M e_i)ᵀ B_P η  ⇒  G η = ξ
    let g = &(omega_matrix * bm).transpose() * bp;
    let u = solve(&g, &DenseMatrix::identity(n))?.ok_or(Error::DegenerateForm {
        ratio: 0.0,
        tol: policy.rank_tol,
    })?;
    let id = DenseMatrix::identity(n);
    let deviation = (&u.transpose() * &u)
        .max_abs_diff(&id)
        .max((&u * &u.transpose()).max_abs_diff(&id));
    if deviation > policy.rank_tol {
        return Err(Error::NotUnitary {
            deviation,
            tol: policy.rank_tol,
        });
    }
    let polarization = build_polarization(u, *policy)?;
    Ok(AdaptedPolarization {
        polarization,
        frame: bp.hstack(bm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn e(d: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        v
    }

    fn span(d: usize, vs: &[&[f64]]) -> Subspace {
        orthonormalize(
            &DenseMatrix::from_columns(d, vs).unwrap(),
            &TolerancePolicy::default(),
        )
        .unwrap()
    }

    #[test]
    fn scalar_structure_is_j() {
        let p = Polarization::standard(1).unwrap();
        let j = DenseMatrix::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        assert_eq!(p.omega_matrix(), &j);
        let w2 = p.w() * p.w();
        assert_eq!(w2, -&DenseMatrix::identity(2));
    }

    #[test]
    fn rejects_non_isometry() {
        let u = DenseMatrix::identity(2).scale(2.0);
        assert!(matches!(
            build_polarization(u, TolerancePolicy::default()),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn omega_block_formula() {
        let p = Polarization::standard(2).unwrap();
        // x-part e1 against y-part e1
        assert_eq!(omega(&p, &e(4, 2), &e(4, 0)).unwrap(), 1.0);
        assert_eq!(omega(&p, &e(4, 0), &e(4, 2)).unwrap(), -1.0);
        assert!(omega(&p, &e(4, 0), &e(2, 0)).is_err());
    }

    #[test]
    fn lagrangian_checks() {
        let p = Polarization::standard(2).unwrap();
        assert!(is_lagrangian(&p, &p.m()).unwrap());
        assert!(is_lagrangian(&p, &p.m_perp()).unwrap());
        let n = span(4, &[&[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 2.0]]);
        assert!(is_lagrangian(&p, &n).unwrap());
        let mixed = Subspace::coordinate(4, &[0, 2]);
        assert!(!is_isotropic(&p, &mixed).unwrap());
        assert!(!is_lagrangian(&p, &mixed).unwrap());
        // isotropic but not maximal
        assert!(is_isotropic(&p, &Subspace::coordinate(4, &[0])).unwrap());
        assert!(!is_lagrangian(&p, &Subspace::coordinate(4, &[0])).unwrap());
    }

    #[test]
    fn symplectic_complements() {
        let p = Polarization::standard(2).unwrap();
        let pol = p.policy();
        let c = symplectic_complement(&p, &p.m()).unwrap();
        assert!(crate::subspace::subspace_equal(&c, &p.m(), pol).unwrap());
        assert_eq!(
            symplectic_complement(&p, &Subspace::zero(4))
                .unwrap()
                .rank(),
            4
        );

        let p1 = Polarization::standard(1).unwrap();
        let l = Subspace::coordinate(2, &[0]);
        let c1 = symplectic_complement(&p1, &l).unwrap();
        assert!(crate::subspace::subspace_equal(&c1, &l, pol).unwrap());
    }

    #[test]
    fn canonical_form_gives_identity() {
        let n = 3;
        let z = DenseMatrix::zeros(n, n);
        let id = DenseMatrix::identity(n);
        let omega_m = DenseMatrix::block2x2(&z, &id, &-&id, &z);
        let p = Polarization::standard(n).unwrap();
        let ad = u_from_omega(&omega_m, &p.m(), &TolerancePolicy::default()).unwrap();
        assert!(ad.polarization.u().max_abs_diff(&id) < 1e-14);

        let scaled = omega_m.scale(2.0);
        assert!(matches!(
            u_from_omega(&scaled, &p.m(), &TolerancePolicy::default()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn u_from_omega_errors() {
        let pol = TolerancePolicy::default();
        let p = Polarization::standard(1).unwrap();
        let sym = DenseMatrix::identity(2);
        assert!(matches!(
            u_from_omega(&sym, &p.m(), &pol),
            Err(Error::NotSkew { .. })
        ));
        assert!(matches!(
            u_from_omega(&DenseMatrix::zeros(2, 2), &p.m(), &pol),
            Err(Error::DegenerateForm { .. })
        ));
        let p2 = Polarization::standard(2).unwrap();
        let mixed = Subspace::coordinate(4, &[0, 2]);
        assert!(matches!(
            u_from_omega(p2.omega_matrix(), &mixed, &pol),
            Err(Error::NotLagrangian { .. })
        ));
    }

    #[test]
    fn swap_halves_round_trip() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(swap_halves(&v), vec![3.0, 4.0, 1.0, 2.0]);
        assert_eq!(swap_halves(&swap_halves(&v)), v.to_vec());
    }
}
