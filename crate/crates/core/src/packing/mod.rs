//! The thin group `Γ_ρ`, its orbit `Γ·e_ρ`, descent to the base cluster and
//! the exact packing checks.

pub mod descent;
pub mod enumerate;
pub mod fast;
pub mod group;
pub mod verify;

pub use descent::{base_cluster, descend, find_cluster, height, height_base, interior_point, Cluster, Descent};
pub use enumerate::{cell_excess, enumerate, BoundKind, EnumerateOptions, Enumeration, SphereRecord, Window};
pub use group::{build_group, Generator, GeneratorKind, GeneratorSet};
pub use verify::{
    descartes_check, parity_sample, random_clusters, verify_packing, DescartesReport, PackingReport, ParityReport,
};

/// Default curvature bound per ρ, chosen for desk-scale runtimes.
pub fn default_kmax(rho: usize) -> i64 {
    match rho {
        ..=5 => 40,
        6..=8 => 10,
        _ => 5,
    }
}
