//! Fundamental domains: faces, prism vertices and the sign checklists.

pub mod cases;
pub mod checks;
pub mod faces;
pub mod vertices;

pub use cases::{run_case, DomainCase};
pub use checks::{edge_covered, edge_dome_point, face2_covered, vertex_side, CheckResult, Verdict};
pub use faces::{build_faces, Face, FaceKind, FaceRole};
pub use vertices::solve_vertices;
