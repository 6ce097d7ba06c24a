use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lorentz::{dot_unchecked, full_span, isotropic_on_plane, solve_in_span};
use crate::vector::{check_rho, LatticeVector};

use super::faces::build_faces;

/// Prism vertices `Q_1 … Q_{ρ−2}` (on `F_{ρ−1}`) and `Q_1′ … Q_{ρ−2}′`
/// (on `F_ρ`).
///
/// `Q_i` satisfies every prism equation `F_j`, `j ≤ ρ−2`, except the i-th,
/// plus the closing face; the two-dimensional solution space contains `E`,
/// and `Q_i` is its other isotropic ray.
pub fn solve_vertices(rho: usize) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
    check_rho(rho)?;
    let faces = build_faces(rho)?;
    let e = LatticeVector::strip_point(rho);
    let span = full_span(rho);
    let side = |closing: usize| -> Result<Vec<LatticeVector>> {
        (1..=rho - 2)
            .map(|i| {
                let walls: Vec<LatticeVector> = (1..=rho - 2)
                    .filter(|&j| j != i)
                    .chain([closing])
                    .map(|j| faces[j - 1].vector.clone())
                    .collect();
                isotropic_on_plane(&span, &walls, &e)
            })
            .collect()
    };
    Ok((side(rho - 1)?, side(rho)?))
}

/// Dimension of the common solution space of the prism faces `F_1 … F_ρ`.
///
/// Every face passes through `E`, so the answer is 1 (the ray of `E`):
/// the prism is bounded in `∂H_E` exactly when nothing else survives.
pub fn prism_kernel_dimension(rho: usize) -> Result<usize> {
    let faces = build_faces(rho)?;
    let walls: Vec<LatticeVector> = faces[..rho].iter().map(|f| f.vector.clone()).collect();
    let e = LatticeVector::strip_point(rho);
    if let Some(w) = walls.iter().find(|w| !dot_unchecked(w, &e).is_zero()) {
        return Err(Error::Degenerate(format!("E is off the wall {w}")));
    }
    Ok(solve_in_span(&full_span(rho), &walls).len())
}
