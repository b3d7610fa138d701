use alloc::string::String;

/// Errors raised by the subspace, symplectic, projective, Möbius and
/// spectral layers. Every variant that stems from a tolerance test carries
/// the measured quantity and the tolerance it was compared against.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix data has {found} entries, {rows}x{cols} needs {}", rows * cols)]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("ambient dimension must be at least 1")]
    EmptyAmbient,

    #[error("invalid tolerance policy: {0}")]
    BadTolerance(&'static str),

    #[error("basis is not orthonormal: deviation {deviation:e} > tol {tol:e}")]
    NotOrthonormal { deviation: f64, tol: f64 },

    #[error("subspace has rank 0")]
    EmptySubspace,

    #[error("map is not orthogonal: max |U^T U - I| = {deviation:e} > tol {tol:e}")]
    NotOrthogonal { deviation: f64, tol: f64 },

    #[error("form is not skew-symmetric: max |Ω + Ω^T| = {deviation:e} > tol {tol:e}")]
    NotSkew { deviation: f64, tol: f64 },

    #[error("form is degenerate: σ_min/σ_max = {ratio:e} <= tol {tol:e}")]
    DegenerateForm { ratio: f64, tol: f64 },

    #[error("subspace is not Lagrangian: rank {rank} (need {n}), isotropy defect {defect:e} (tol {tol:e})")]
    NotLagrangian {
        rank: usize,
        n: usize,
        defect: f64,
        tol: f64,
    },

    #[error("induced map M -> M^⊥ is not unitary: max |U^T U - I| = {deviation:e} > tol {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("operator is not symmetric: max |T - T^T| = {asymmetry:e} > tol {tol:e}")]
    NotSymmetric { asymmetry: f64, tol: f64 },

    #[error("inconsistent blocks: {0}")]
    InconsistentBlocks(String),

    #[error("two-subspace dimension identity violated: {0}")]
    InconsistentDecomposition(String),

    #[error("chart is ill-conditioned: condition {cond:e} > bound {bound:e} (principal angle {angle:e} rad to π/2)")]
    IllConditionedChart { cond: f64, bound: f64, angle: f64 },

    #[error("determinant {det} differs from 1 by more than {tol:e}")]
    NotUnitDeterminant { det: f64, tol: f64 },

    #[error("semigroup parameter must be positive, got {0}")]
    NonpositiveParameter(f64),

    #[error("denominator cT + dI is singular: σ_min = {sigma_min:e} <= floor {floor:e}")]
    SingularDenominator { sigma_min: f64, floor: f64 },

    #[error("vector is zero")]
    ZeroVector,

    #[error("membership leaves the chart: N_∞ has dimension {ninf_dim} and the M-part is unreachable (residual {residual:e})")]
    ChartDegenerate { ninf_dim: usize, residual: f64 },

    #[error("point has nontrivial N_∞ of dimension {0}")]
    NontrivialNInfinity(usize),

    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigen-residual check failed: {residual:e} > tol {tol:e}")]
    ResidualCheck { residual: f64, tol: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
