use num_traits::ToPrimitive;
use serde::Serialize;

use crate::domain::faces::{build_faces, special, FaceKind};
use crate::error::{Error, Result};
use crate::lorentz::{midpoint, phi_matrix, reflection_matrix, Isometry};
use crate::vector::{check_rho, LatticeVector};

use super::fast::FastVec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GeneratorKind {
    Reflection { normal: LatticeVector },
    Phi { p: LatticeVector, q: LatticeVector },
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub kind: GeneratorKind,
    pub isometry: Isometry,
    /// Row-major copy of the matrix for the search loop.
    fast_matrix: Vec<i64>,
    fast_normal: Option<(FastVec, i64)>,
}

impl Generator {
    fn new(label: String, kind: GeneratorKind, isometry: Isometry) -> Result<Self> {
        let fast_matrix = isometry
            .matrix()
            .iter()
            .flatten()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::Degenerate(format!("{label} has a huge entry")))
            })
            .collect::<Result<Vec<_>>>()?;
        let fast_normal = match &kind {
            GeneratorKind::Reflection { normal } => {
                let n = FastVec::from_lattice(normal)?;
                Some((n, n.dot(&n)?))
            }
            GeneratorKind::Phi { .. } => None,
        };
        Ok(Self {
            label,
            kind,
            isometry,
            fast_matrix,
            fast_normal,
        })
    }

    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        self.isometry.apply(x)
    }

    /// Applies the generator to a machine-integer vector.
    pub fn apply_fast(&self, x: &FastVec) -> Result<FastVec> {
        match &self.fast_normal {
            // R_n(x) = x − (2 n⊙x / n⊙n) n, exact because the matrix is integral
            // and n is primitive.
            Some((n, nn)) => {
                let t = 2 * n.dot(x)?;
                debug_assert_eq!(t % nn, 0);
                x.add_scaled(-(t / nn), n)
            }
            None => FastVec::mat_apply(&self.fast_matrix, x),
        }
    }

    /// True for maps fixing the strip point `E = e_{ρ−1} + e_ρ`.
    pub fn fixes(&self, e: &LatticeVector) -> bool {
        &self.apply(e) == e
    }
}

/// The thin group `Γ_ρ`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub rho: usize,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Applies the word `word` (indices into the generator list, applied
    /// left to right) to `x`.
    pub fn apply_word(&self, word: &[usize], x: &LatticeVector) -> LatticeVector {
        word.iter()
            .fold(x.clone(), |acc, &g| self.generators[g].apply(&acc))
    }

    pub fn word_labels(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&g| self.generators[g].label.clone()).collect()
    }
}

/// The cusp points `P_1`, `P_2` used by the two `φ` maps at ρ = 9, 10.
pub fn phi_points(rho: usize) -> Option<(LatticeVector, LatticeVector)> {
    let e = LatticeVector::strip_point(rho);
    let (q, _) = crate::domain::solve_vertices(rho).ok()?;
    match rho {
        9 => Some((midpoint(&q[3], &q[4], &e).ok()?, special::p2_rho9())),
        10 => Some((midpoint(&q[3], &q[5], &e).ok()?, special::p2_rho10())),
        _ => None,
    }
}

/// Reflections in every reflection face except the base face `F_ρ`, plus
/// `φ_{P_1,E}` and `φ_{P_1,P_2}` for ρ = 9, 10.
pub fn build_group(rho: usize) -> Result<GeneratorSet> {
    check_rho(rho)?;
    let mut generators = Vec::new();
    for face in build_faces(rho)? {
        if face.kind != FaceKind::Reflection || face.index == rho {
            continue;
        }
        let m = reflection_matrix(&face.vector)?;
        generators.push(Generator::new(
            face.label(),
            GeneratorKind::Reflection {
                normal: face.vector.clone(),
            },
            m,
        )?);
    }
    if let Some((p1, p2)) = phi_points(rho) {
        let e = LatticeVector::strip_point(rho);
        for (label, q) in [("phi(P_1,E)", e), ("phi(P_1,P_2)", p2)] {
            let m = phi_matrix(&p1, &q)?;
            generators.push(Generator::new(
                label.to_string(),
                GeneratorKind::Phi { p: p1.clone(), q },
                m,
            )?);
        }
    }
    for g in &generators {
        if !(g.isometry.preserves_form() && g.isometry.is_involution()) {
            return Err(Error::NotCertified(format!("generator {} is not an involutive isometry", g.label)));
        }
    }
    Ok(GeneratorSet { rho, generators })
}
