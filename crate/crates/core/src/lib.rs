//! Exact computations for left-invariant almost Hermitian structures on Lie algebras.
//!
//! Structures are given by structure constants in an orthonormal frame together with a
//! Kähler form. The crate computes the intrinsic torsion and its Gray–Hervella components,
//! the Lee form, curvature and Ricci data of the Levi-Civita, minimal and Chern connections,
//! and audits the identities relating them. All arithmetic is exact over ℚ(√d) with
//! optional polynomial parameters.

pub mod algebra;
pub mod analysis;
pub mod audit;
pub mod catalog;
pub mod curvature;
pub mod decomposition;
pub mod form;
pub mod ops;
pub mod random;
pub mod scalar;
pub mod structure;
pub mod tensor;

pub use algebra::LieAlgebra;
pub use analysis::Analysis;
pub use form::{Form, VolumeForm};
pub use scalar::{Rational, Scalar};
pub use structure::AlmostHermitian;
pub use tensor::{einsum, Tensor};
