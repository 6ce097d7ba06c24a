//! Exact construction and verification of the generalized Apollonian
//! hypersphere packings attached to the Lorentzian lattices `Λ_ρ`,
//! `ρ = 4 … 10`.
//!
//! * [`lorentz`]: the form `J_ρ`, reflections, `φ` maps, curvatures and
//!   ideal-point solvers.
//! * [`domain`]: faces, prism vertices and the finite sign checklists that
//!   certify each fundamental domain.
//! * [`packing`]: the thin group `Γ_ρ`, orbit enumeration, descent,
//!   clusters and the Descartes identities.
//! * [`coxeter`]: Coxeter-graph data for reflective generator sets.
//! * [`render`]: Euclidean charts and SVG output (the only floating point).

pub mod coxeter;
pub mod domain;
pub mod error;
pub mod linalg;
pub mod lorentz;
pub mod packing;
pub mod render;
pub mod surd;
pub mod vector;

pub use error::{Error, Result};
pub use lorentz::{BilinearForm, Isometry};
pub use vector::{LatticeVector, RationalVector};
