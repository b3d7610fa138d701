//! Points of the operator projective line: Lagrangian subspaces `N`
//! together with their splitting `N = N_0 ⊕ N_1 ⊕ N_∞`, the two-subspace
//! decomposition relative to `M`, and the pair of chart operators.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::matrix::DenseMatrix;
use crate::subspace::{
    image, intersect, orthogonal_complement, orthonormalize, principal_angles, relative_complement,
    subspace_sum, Subspace,
};
use crate::symplectic::{is_lagrangian, require_lagrangian, Polarization};

/// Charts whose generic-part solve exceeds this condition number are
/// rejected by [`extract_operator`].
pub const DEFAULT_CHART_COND_BOUND: f64 = 1e10;

/// A Lagrangian subspace with its cached splitting
/// `N_0 = N ∩ M`, `N_∞ = N ∩ M^⊥`, `N_1 = N ⊖ (N_0 ⊕ N_∞)`.
#[derive(Clone, Debug)]
pub struct LagrangianPoint {
    space: Subspace,
    n0: Subspace,
    n1: Subspace,
    ninf: Subspace,
}

impl LagrangianPoint {
    pub fn new(p: &Polarization, space: Subspace) -> Result<Self> {
        require_lagrangian(p, &space)?;
        let pol = p.policy();
        let n0 = intersect(&space, &p.m(), pol)?;
        let ninf = intersect(&space, &p.m_perp(), pol)?;
        let special = subspace_sum(&n0, &ninf, pol)?;
        let n1 = relative_complement(&space, &special, pol)?;
        if n0.rank() + n1.rank() + ninf.rank() != p.n() {
            return Err(Error::InconsistentDecomposition(format!(
                "dim N_0 + dim N_1 + dim N_∞ = {} + {} + {} != {}",
                n0.rank(),
                n1.rank(),
                ninf.rank(),
                p.n()
            )));
        }
        Ok(Self {
            space,
            n0,
            n1,
            ninf,
        })
    }

    /// Orthonormalises the columns of `vectors` and checks the span is
    /// Lagrangian.
    pub fn from_vectors(p: &Polarization, vectors: &DenseMatrix) -> Result<Self> {
        if vectors.rows() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: vectors.rows(),
            });
        }
        Self::new(p, orthonormalize(vectors, p.policy())?)
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn n0(&self) -> &Subspace {
        &self.n0
    }

    pub fn n1(&self) -> &Subspace {
        &self.n1
    }

    pub fn n_inf(&self) -> &Subspace {
        &self.ninf
    }
}

/// `N` is compatible with `U` iff it is Lagrangian for the induced form.
pub fn check_compatible(p: &Polarization, s: &Subspace) -> Result<bool> {
    is_lagrangian(p, s)
}

/// The six subspaces of the two-subspace picture for the pair `(M, N)`.
#[derive(Clone, Debug)]
pub struct TwoSubspaceDecomposition {
    pub m00: Subspace,
    pub m01: Subspace,
    pub m10: Subspace,
    pub m11: Subspace,
    pub m0: Subspace,
    pub m1: Subspace,
    /// Principal angles between `N_1` and `M` (empty when `N_1 = 0`).
    pub generic_angles: Vec<f64>,
}

impl TwoSubspaceDecomposition {
    /// `[dim M00, dim M01, dim M10, dim M11, dim M0, dim M1]`.
    pub fn dims(&self) -> [usize; 6] {
        [
            self.m00.rank(),
            self.m01.rank(),
            self.m10.rank(),
            self.m11.rank(),
            self.m0.rank(),
            self.m1.rank(),
        ]
    }
}

pub fn decompose(p: &Polarization, pt: &LagrangianPoint) -> Result<TwoSubspaceDecomposition> {
    p.check_subspace(pt.space())?;
    let pol = p.policy();
    let m = p.m();
    let mp = p.m_perp();
    let n = pt.space();
    let nperp = orthogonal_complement(n);

    let m00 = intersect(&m, n, pol)?;
    let m01 = intersect(&m, &nperp, pol)?;
    let m10 = intersect(&mp, n, pol)?;
    let m11 = intersect(&mp, &nperp, pol)?;
    let m0 = relative_complement(&m, &subspace_sum(&m00, &m01, pol)?, pol)?;
    let m1 = relative_complement(&mp, &subspace_sum(&m10, &m11, pol)?, pol)?;

    let pairs = [
        ("M00", m00.rank(), "M11", m11.rank()),
        ("M01", m01.rank(), "M10", m10.rank()),
        ("M0", m0.rank(), "M1", m1.rank()),
    ];
    for (a, ra, b, rb) in pairs {
        if ra != rb {
            return Err(Error::InconsistentDecomposition(format!(
                "dim {a} = {ra} but dim {b} = {rb}"
            )));
        }
    }
    let generic_angles = if pt.n1().is_zero() {
        Vec::new()
    } else {
        principal_angles(pt.n1(), &m)?
    };
    Ok(TwoSubspaceDecomposition {
        m00,
        m01,
        m10,
        m11,
        m0,
        m1,
        generic_angles,
    })
}

/// Image of a subspace of `M` under `U` (as a subspace of `M^⊥`).
pub fn u_image(p: &Polarization, s: &Subspace) -> Result<Subspace> {
    p.check_subspace(s)?;
    image(&p.u_embedded(), s, p.policy())
}

fn check_operator(p: &Polarization, t: &DenseMatrix, n: usize) -> Result<()> {
    if t.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if t.rows() != n { t.rows() } else { t.cols() },
        });
    }
    let asym = t.asymmetry();
    let tol = p.policy().rank_tol * t.max_abs().max(1.0);
    if asym > tol {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            tol,
        });
    }
    Ok(())
}

/// The graph `{(U T x, x) : x ∈ M}` of a symmetric `T`.
pub fn graph_of_operator(p: &Polarization, t: &DenseMatrix) -> Result<LagrangianPoint> {
    check_operator(p, t, p.n())?;
    let basis = (p.u() * t).vstack(&DenseMatrix::identity(p.n()));
    LagrangianPoint::from_vectors(p, &basis)
}

/// The `M0` block left over by `M00 ⊕ M01` inside `M`; `T0` in
/// [`graph_extended`] is expressed in this subspace's basis.
pub fn m0_block(p: &Polarization, m00: &Subspace, m01: &Subspace) -> Result<Subspace> {
    p.check_subspace(m00)?;
    p.check_subspace(m01)?;
    let pol = p.policy();
    relative_complement(&p.m(), &subspace_sum(m00, m01, pol)?, pol)
}

/// Builds `N = graph(T0 on M0) ⊕ {(0, x0) : x0 ∈ M00} ⊕ {(U m, 0) : m ∈ M01}`.
///
/// `T0` acts on the coordinates of [`m0_block`]`(p, m00, m01)`, must be
/// symmetric and invertible; `M00`, `M01` must be mutually orthogonal
/// subspaces of `M`.
pub fn graph_extended(
    p: &Polarization,
    t0: &DenseMatrix,
    m00: &Subspace,
    m01: &Subspace,
) -> Result<LagrangianPoint> {
    p.check_subspace(m00)?;
    p.check_subspace(m01)?;
    let pol = p.policy();
    let m = p.m();
    for (name, s) in [("M00", m00), ("M01", m01)] {
        let inside = intersect(s, &m, pol)?;
        if inside.rank() != s.rank() {
            return Err(Error::InconsistentBlocks(format!(
                "{name} is not contained in M"
            )));
        }
    }
    let overlap = (&m00.basis().transpose() * m01.basis()).max_abs();
    if overlap > pol.angle_tol {
        return Err(Error::InconsistentBlocks(format!(
            "M00 and M01 are not orthogonal (max |B00ᵀ B01| = {overlap:e})"
        )));
    }
    let m0 = m0_block(p, m00, m01)?;
    let r0 = m0.rank();
    if t0.shape() != (r0, r0) {
        return Err(Error::InconsistentBlocks(format!(
            "T0 is {}x{} but the M0 block has dimension {r0}",
            t0.rows(),
            t0.cols()
        )));
    }
    if r0 > 0 {
        check_operator(p, t0, r0).map_err(|e| Error::InconsistentBlocks(format!("T0: {e}")))?;
        let dec = svd(t0);
        if dec.sigma_min() <= pol.rank_tol * dec.sigma_max() {
            return Err(Error::InconsistentBlocks(format!(
                "T0 is not invertible (σ_min = {:e})",
                dec.sigma_min()
            )));
        }
    }
    let x0 = p.x_block(m0.basis());
    let graph = (&(p.u() * &x0) * t0).vstack(&x0);
    let zero_pt = DenseMatrix::zeros(p.n(), m00.rank()).vstack(&p.x_block(m00.basis()));
    let inf_pt = (p.u() * &p.x_block(m01.basis())).vstack(&DenseMatrix::zeros(p.n(), m01.rank()));
    let all = graph.hstack(&zero_pt).hstack(&inf_pt);
    LagrangianPoint::from_vectors(p, &all)
}

/// The two chart operators of a Lagrangian point.
///
/// `t_hat` is `n × n` in `M` coordinates: on `dom_hat = M0 ⊕ M00` its graph
/// `{(U T̂ x, x)}` is `N_1 ⊕ N_0`, and it is zero on the `M01` directions.
/// `t_check` is `n × n` in `M^⊥` coordinates: on `dom_check = M1 ⊕ M10` the
/// graph `{(y, Uᵀ Ť y)}` is `N_1 ⊕ N_∞`.
#[derive(Clone, Debug)]
pub struct BiFredholmPair {
    pub t_hat: DenseMatrix,
    pub t_check: DenseMatrix,
    pub dom_hat: Subspace,
    pub dom_check: Subspace,
}

impl BiFredholmPair {
    /// `T̂` compressed to the orthonormal basis of `dom_hat`.
    pub fn t_hat_block(&self) -> DenseMatrix {
        let n = self.t_hat.rows();
        let q = self
            .dom_hat
            .basis()
            .submatrix(n, 2 * n, 0, self.dom_hat.rank());
        &(&q.transpose() * &self.t_hat) * &q
    }

    /// `Ť` compressed to the orthonormal basis of `dom_check`.
    pub fn t_check_block(&self) -> DenseMatrix {
        let n = self.t_check.rows();
        let q = self
            .dom_check
            .basis()
            .submatrix(0, n, 0, self.dom_check.rank());
        &(&q.transpose() * &self.t_check) * &q
    }
}

/// Solves `A = target · source⁺` on the column space of a chart basis and
/// returns it with the chart domain (as coordinates in `R^n`).
fn chart_solve(
    source: &DenseMatrix,
    target: &DenseMatrix,
    cond_bound: f64,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = source.rows();
    let k = source.cols();
    if k == 0 {
        return Ok((DenseMatrix::zeros(n, n), DenseMatrix::zeros(n, 0)));
    }
    let dec = svd(source);
    let smin = dec.s[k - 1];
    // columns of the chart basis are orthonormal, so σ_max ≤ 1
    let cond = if smin > 0.0 {
        1.0 / smin
    } else {
        f64::INFINITY
    };
    if cond > cond_bound {
        return Err(Error::IllConditionedChart {
            cond,
            bound: cond_bound,
            angle: libm::acos(smin.min(1.0)),
        });
    }
    // source = Us S Vᵀ (thin, k columns)  ⇒  source⁺ = V S⁻¹ Usᵀ
    let idx: Vec<usize> = (0..k).collect();
    let us = dec.u.select_columns(&idx);
    let vs = DenseMatrix::from_fn(k, k, |i, j| dec.v.get(i, j) / dec.s[j]);
    let pinv = &vs * &us.transpose();
    Ok((target * &pinv, us))
}

fn symmetrized(a: DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    let asym = a.asymmetry();
    let bound = tol * a.max_abs().max(1.0);
    if asym > bound {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            tol: bound,
        });
    }
    Ok(a.symmetric_part())
}

pub fn extract_operator(p: &Polarization, pt: &LagrangianPoint) -> Result<BiFredholmPair> {
    extract_operator_with(p, pt, DEFAULT_CHART_COND_BOUND)
}

/// [`extract_operator`] with an explicit chart condition bound.
pub fn extract_operator_with(
    p: &Polarization,
    pt: &LagrangianPoint,
    cond_bound: f64,
) -> Result<BiFredholmPair> {
    p.check_subspace(pt.space())?;
    require_lagrangian(p, pt.space())?;
    let n = p.n();
    let tol = p.policy().angle_tol;

    // first chart: N_0 ⊕ N_1 over M, T̂ x = Uᵀ y
    let hat = pt.n0().basis().hstack(pt.n1().basis());
    let (yh, xh) = (p.y_block(&hat), p.x_block(&hat));
    let (a_hat, dom_h) = chart_solve(&xh, &(&p.u().transpose() * &yh), cond_bound)?;
    let t_hat = symmetrized(a_hat, tol)?;

    // second chart: N_1 ⊕ N_∞ over M^⊥, Ť y = U x
    let check = pt.n1().basis().hstack(pt.n_inf().basis());
    let (yc, xc) = (p.y_block(&check), p.x_block(&check));
    let (a_check, dom_c) = chart_solve(&yc, &(p.u() * &xc), cond_bound)?;
    let t_check = symmetrized(a_check, tol)?;

    let dom_hat = Subspace::from_orthonormal(
        DenseMatrix::zeros(n, dom_h.cols()).vstack(&dom_h),
        p.policy().rank_tol.max(1e-12),
    )?;
    let dom_check = Subspace::from_orthonormal(
        dom_c.vstack(&DenseMatrix::zeros(n, dom_c.cols())),
        p.policy().rank_tol.max(1e-12),
    )?;
    Ok(BiFredholmPair {
        t_hat,
        t_check,
        dom_hat,
        dom_check,
    })
}
