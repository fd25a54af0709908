//! Scribability of polytopes: realizations, face classification against the
//! unit sphere, and constructive realization algorithms.

pub mod caps;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod hyperbolic;
pub mod iso;
pub mod lattice;
pub mod linalg;
pub mod lorentz;
pub mod minnorm;
pub mod opt;
pub mod polytope;
pub mod scribability;

pub use error::{Error, Result, EPS_PRED};
pub use lattice::FaceLattice;
