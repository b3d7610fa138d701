//! Lagrangian subspaces of a polarized symplectic space, the Möbius action of
//! `SL(2, R)` on them, and the spectral probes that action provides.
//!
//! Coordinates are ordered `z = (y, x)` with `y ∈ M^⊥` first and `x ∈ M`
//! second, so `M = span(e_{n+1}, …, e_{2n})`.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod matrix;
pub mod mobius;
pub mod projective;
pub mod spectral;
pub mod subspace;
pub mod symplectic;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use mobius::{GroupElement, ProjectivePoint, SubgroupTag};
pub use projective::{BiFredholmPair, LagrangianPoint, TwoSubspaceDecomposition};
pub use spectral::{EigenReport, Eigenvalue, ProbeResult};
pub use subspace::{Subspace, TolerancePolicy};
pub use symplectic::{AdaptedPolarization, Polarization};
