use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorentz::{dot_rational, dot_unchecked, norm2, rank_of, solve_in_span};
use crate::surd::{Surd, SurdVector};
use crate::vector::{signum, LatticeVector, RationalVector};

use super::faces::Face;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The computation disagrees with a printed claim that the rest of the
    /// argument does not depend on.
    PaperDiscrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub vectors: Vec<String>,
    pub value: String,
    pub verdict: Verdict,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, vectors: Vec<String>, value: impl ToString, ok: bool) -> Self {
        Self {
            name: name.into(),
            vectors,
            value: value.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn discrepancy(name: impl Into<String>, vectors: Vec<String>, value: impl ToString) -> Self {
        Self {
            name: name.into(),
            vectors,
            value: value.to_string(),
            verdict: Verdict::PaperDiscrepancy,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Exact sign of `face⊙v`.
pub fn vertex_side(face: &Face, v: &LatticeVector) -> i8 {
    signum(&dot_unchecked(&face.vector, v))
}

/// Point where the segment `AB` of `∂H_E` meets the sphere or plane of
/// `face`, choosing the crossing nearer to `near`.
///
/// Points of the line are `Ã + t(B̃ − Ã) + λE` with `Ã = A/(−A⊙E)`; the
/// isotropy condition fixes `λ = t(1−t)·Ã⊙B̃`, and `face⊙P = 0` becomes a
/// quadratic in `t` (linear when the face passes through `E`). Roots are
/// generally quadratic irrationals, so the result is a [`SurdVector`]
/// normalized by `P⊙E = −1`.
pub fn edge_dome_point(
    a: &LatticeVector,
    b: &LatticeVector,
    face: &Face,
    e: &LatticeVector,
    near: &LatticeVector,
) -> Result<SurdVector> {
    let at = normalize(a, e)?;
    let bt = normalize(b, e)?;
    let er = e.to_rational();
    let n = &face.vector;
    let c = dot_rational(&at, &bt);
    let da = crate::lorentz::dot_mixed(n, &at);
    let db = crate::lorentz::dot_mixed(n, &bt);
    let de = BigRational::from_integer(dot_unchecked(n, e));
    // f(t) = da + t(db − da + de·c) − de·c·t²
    let alpha = -(&de * &c);
    let beta = &db - &da + &de * &c;
    let gamma = da;
    let dir = bt.add_scaled(&-BigRational::one(), &at);
    let point = |t: &Surd| -> SurdVector {
        let one = Surd::rational(BigRational::one(), t.d.clone());
        let lambda = t.clone() * (one - t.clone()) * Surd::rational(c.clone(), t.d.clone());
        SurdVector::along(&at, &dir, t).add_scaled(&lambda, &er)
    };
    let zero = BigRational::zero();
    if alpha.is_zero() {
        if beta.is_zero() {
            return Err(Error::NoIntersection(format!(
                "segment {a} – {b} is parallel to {}",
                face.label()
            )));
        }
        let t = Surd::rational(-gamma / beta, zero);
        return Ok(point(&t));
    }
    let disc = &beta * &beta - BigRational::from_integer(BigInt::from(4)) * &alpha * &gamma;
    if disc.is_negative() {
        return Err(Error::NoIntersection(format!(
            "segment {a} – {b} misses {}",
            face.label()
        )));
    }
    let root = Surd::sqrt(&disc);
    let d = root.d.clone();
    let two_alpha = BigRational::from_integer(BigInt::from(2)) * &alpha;
    let base = Surd::rational(-&beta / &two_alpha, d.clone());
    let half = Surd::rational(BigRational::one() / &two_alpha, d.clone()) * root.with_radicand(&d);
    let p1 = point(&(base.clone() + half.clone()));
    let p2 = point(&(base - half));
    // |PN|² ∝ P⊙N / (N⊙E) with P⊙E fixed; N⊙E < 0 flips the order.
    let d1 = p1.dot_lattice(near);
    let d2 = p2.dot_lattice(near);
    let ne = signum(&dot_unchecked(near, e));
    let first_nearer = if ne < 0 { d1 >= d2 } else { d1 <= d2 };
    Ok(if first_nearer { p1 } else { p2 })
}

fn normalize(a: &LatticeVector, e: &LatticeVector) -> Result<RationalVector> {
    let ae = dot_unchecked(a, e);
    if ae.is_zero() {
        return Err(Error::Degenerate(format!("{a} coincides with E")));
    }
    Ok(a.to_rational().scale(&BigRational::new(BigInt::from(-1), ae)))
}

/// The common point of the two spheres above `AB`: the one-dimensional
/// solution of `d1⊙P = d2⊙P = 0` in `span{A, B, E}`.
///
/// The edge is covered iff `P⊙P ≤ 0`: a timelike `P` is a point of `H`
/// where the two domes cross above the segment, an isotropic `P` is a
/// crossing on the segment itself, and a spacelike `P` means the domes
/// never meet over it.
pub fn edge_covered(
    a: &LatticeVector,
    b: &LatticeVector,
    e: &LatticeVector,
    d1: &Face,
    d2: &Face,
) -> Result<CheckResult> {
    kernel_check(&[a, b], e, &[d1, d2])
}

/// As [`edge_covered`] for the 2-face `ABC` and three spheres.
pub fn face2_covered(
    a: &LatticeVector,
    b: &LatticeVector,
    c: &LatticeVector,
    e: &LatticeVector,
    d1: &Face,
    d2: &Face,
    d3: &Face,
) -> Result<CheckResult> {
    kernel_check(&[a, b, c], e, &[d1, d2, d3])
}

fn kernel_check(points: &[&LatticeVector], e: &LatticeVector, faces: &[&Face]) -> Result<CheckResult> {
    let mut span: Vec<LatticeVector> = points.iter().map(|p| (*p).clone()).collect();
    span.push(e.clone());
    if rank_of(&span) != span.len() {
        return Err(Error::Degenerate(format!(
            "points {} and E are linearly dependent",
            points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ; ")
        )));
    }
    let walls: Vec<LatticeVector> = faces.iter().map(|f| f.vector.clone()).collect();
    let kernel = solve_in_span(&span, &walls);
    if kernel.len() != 1 {
        return Err(Error::Degenerate(format!(
            "kernel has dimension {}, expected 1",
            kernel.len()
        )));
    }
    let p = kernel[0].clear_denominators();
    let pp = norm2(&p);
    let labels = faces.iter().map(|f| f.label()).collect::<Vec<_>>().join(",");
    let name = format!(
        "{} covered by {labels}",
        if points.len() == 2 { "edge" } else { "2-face" }
    );
    let vectors = points.iter().map(|p| p.to_string()).collect();
    Ok(CheckResult::new(name, vectors, format!("P⊙P = {pp}"), !pp.is_positive()))
}
