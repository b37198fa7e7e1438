//! Exact computations for cubic hypersurfaces with a hyperplane: the
//! Hilbert-Mumford function and torus stability of pairs along the VGIT
//! slope, Jacobian-ring invariants, and the weighted-projective normal form
//! of cubic fivefolds containing a fixed cubic fourfold.

pub mod fiber;
pub mod hm;
pub mod jacobian;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use linalg::{ExactMatrix, HullResult};
pub use poly::{monomial_basis, parse_poly, Monomial, PolyError, Polynomial};
pub use scalar::{Field, Scalar};
