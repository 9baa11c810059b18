//! Finite dimensional representations of the soft torus.
//!
//! The soft torus is the universal C*-algebra on two unitaries `u`, `v`
//! with `‖uv − vu‖ ≤ ε`. This crate builds, for a nonzero *-polynomial `a`
//! and `0 < ε < 2`, an explicit pair of ε-almost-commuting unitary matrices
//! on which `a` does not vanish, together with a certificate that can be
//! re-checked from the matrices alone.
//!
//! Layout:
//! - [`matcore`]: dense complex linear algebra and spectral calculus.
//! - [`ncpoly`]: *-polynomials, parsing, normal ordering, conditional expectation.
//! - [`brep`]: finite families of unitaries with step bound ε, dilation,
//!   periodization, covariant block-shift representations.
//! - [`certify`]: the end-to-end witness search and certificate verifier.
//! - [`io`]: JSON file formats for matrices, families and certificates.

pub mod brep;
pub mod certify;
pub mod io;
pub mod matcore;
pub mod ncpoly;

pub use brep::{BFamily, CovariantRep, HFamily, PeriodicFamily};
pub use certify::{Certificate, SearchParams};
pub use matcore::{ComplexMatrix, HermitianMatrix, Tolerances, UnitaryMatrix, C64};
pub use ncpoly::{CrossedForm, Letter, NCPoly, Symbol};
