use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::lorentz::{dot_unchecked, norm2};
use crate::vector::{check_rho, LatticeVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceRole {
    Transposition,
    UFace,
    Base,
    Dome,
    PhiWall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceKind {
    /// The reflection in the face is a lattice isometry.
    Reflection,
    /// A boundary wall standing in for a `φ` map; its reflection need not
    /// preserve the lattice.
    PhiWall,
}

/// A bounding hyperplane `F_index = H_vector`, oriented so the fundamental
/// domain lies in the closed half-space `vector⊙x ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub index: usize,
    pub name: String,
    pub role: FaceRole,
    pub kind: FaceKind,
    pub vector: LatticeVector,
}

impl Face {
    pub fn label(&self) -> String {
        format!("F_{}", self.index)
    }

    pub fn self_product(&self) -> BigInt {
        norm2(&self.vector)
    }

    /// Sign of `face⊙v`: positive means covered (for domes) or outside the
    /// domain (for vertical walls).
    pub fn side(&self, v: &LatticeVector) -> i8 {
        crate::vector::signum(&dot_unchecked(&self.vector, v))
    }
}

/// `u = e_1 − e_{ρ−2} + E`.
pub fn u_vector(rho: usize) -> LatticeVector {
    &LatticeVector::v(rho, 1, rho - 2) + &LatticeVector::strip_point(rho)
}

/// Published special vectors for the two largest cases.
pub mod special {
    use crate::vector::LatticeVector;

    pub fn n1_rho9() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, -6, 1, 1, 1, 1])
    }
    pub fn n2_rho9() -> LatticeVector {
        LatticeVector::from_slice(&[3, 3, 3, 3, 3, -4, -4, 3, 3])
    }
    pub fn p2_rho9() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, 2, -1, -2, 1, 2])
    }
    pub fn f_rho9() -> LatticeVector {
        LatticeVector::from_slice(&[2, 2, 2, 2, 2, -2, -3, 2, 2])
    }
    /// The midpoint of `Q_4Q_5` as printed, with one entry missing.
    pub const P1_RHO9_PRINTED: [i64; 8] = [1, 1, 1, 0, -1, -1, 1, 1];

    pub fn n_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, 1, -1, -1, -1, 1, 1])
    }
    pub fn n1_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, -3, -3, 1, 1, 1, 1])
    }
    pub fn n2_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[3, 3, 3, 3, 3, 3, -5, -5, 3, 3])
    }
    pub fn p1_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, 0, 0, -1, -1, 1, 1])
    }
    pub fn p2_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, 2, 2, -1, -3, 1, 3])
    }
    pub fn f_rho10() -> LatticeVector {
        LatticeVector::from_slice(&[1, 1, 1, 1, 1, 1, -1, -2, 1, 1])
    }
}

/// The face system of the fundamental domain for `rho`.
///
/// `F_1 … F_{ρ−3}` are the transpositions `v_{i,i+1}`, `F_{ρ−2}` is the
/// u-face, `F_{ρ−1} = v_{ρ−1,ρ}`, `F_ρ = e_ρ` and `F_{ρ+1} = v_{1,ρ−1}` is
/// the dome. ρ = 9 adds the φ-walls `n_1`, `n_2`; ρ = 10 adds the
/// reflective dome `n` and the φ-walls `n_1`, `n_2`.
pub fn build_faces(rho: usize) -> Result<Vec<Face>> {
    check_rho(rho)?;
    let mut faces = Vec::with_capacity(rho + 4);
    let mut push = |name: String, role, kind, vector| {
        let index = faces.len() + 1;
        faces.push(Face {
            index,
            name,
            role,
            kind,
            vector,
        });
    };
    for i in 1..=rho - 3 {
        // Oriented as e_{i+1} − e_i: the prism has x_i ≥ x_{i+1}.
        push(
            format!("v_{{{},{}}}", i, i + 1),
            FaceRole::Transposition,
            FaceKind::Reflection,
            LatticeVector::v(rho, i + 1, i),
        );
    }
    push("u".into(), FaceRole::UFace, FaceKind::Reflection, u_vector(rho));
    push(
        format!("v_{{{},{}}}", rho - 1, rho),
        FaceRole::Transposition,
        FaceKind::Reflection,
        LatticeVector::v(rho, rho - 1, rho),
    );
    push(
        format!("e_{rho}"),
        FaceRole::Base,
        FaceKind::Reflection,
        LatticeVector::e(rho, rho),
    );
    push(
        format!("v_{{1,{}}}", rho - 1),
        FaceRole::Dome,
        FaceKind::Reflection,
        LatticeVector::v(rho, 1, rho - 1),
    );
    match rho {
        9 => {
            push("n_1".into(), FaceRole::PhiWall, FaceKind::PhiWall, special::n1_rho9());
            push("n_2".into(), FaceRole::PhiWall, FaceKind::PhiWall, special::n2_rho9());
        }
        10 => {
            push("n".into(), FaceRole::Dome, FaceKind::Reflection, special::n_rho10());
            push("n_1".into(), FaceRole::PhiWall, FaceKind::PhiWall, special::n1_rho10());
            push("n_2".into(), FaceRole::PhiWall, FaceKind::PhiWall, special::n2_rho10());
        }
        _ => {}
    }
    Ok(faces)
}

/// The linear form `x_2 + … + x_{ρ−3} + 2x_{ρ−2}` of the u-face.
pub fn u_face_equation(x: &LatticeVector) -> BigInt {
    let rho = x.rho();
    let mut acc: BigInt = (2..=rho - 3).map(|i| x.get(i).clone()).sum();
    acc += x.get(rho - 2) * 2;
    acc
}
