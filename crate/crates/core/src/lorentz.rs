//! Exact Lorentzian linear algebra on the lattice `Λ_ρ = e_1ℤ ⊕ … ⊕ e_ρℤ`.
//!
//! The Gram matrix `J_ρ` has 1 on the diagonal and -1 elsewhere, so the
//! product has the closed form `u⊙v = 2·Σ u_i v_i − (Σ u_i)(Σ v_i)`.
//! Everything here is exact; floating point lives in [`crate::render`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::vector::{check_rho, LatticeVector, RationalVector};

fn same_rho(u: &LatticeVector, v: &LatticeVector) -> Result<()> {
    if u.rho() == v.rho() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: u.rho(),
            right: v.rho(),
        })
    }
}

/// The form `J_ρ` ("1 on the diagonal, -1 off it").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BilinearForm {
    rho: usize,
}

impl BilinearForm {
    pub fn new(rho: usize) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self { rho })
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        if i == j {
            1
        } else {
            -1
        }
    }

    pub fn gram(&self) -> Vec<Vec<BigInt>> {
        (0..self.rho)
            .map(|i| (0..self.rho).map(|j| BigInt::from(self.entry(i, j))).collect())
            .collect()
    }

    /// `uᵗ J v` by explicit summation over the Gram matrix.
    pub fn evaluate(&self, u: &LatticeVector, v: &LatticeVector) -> Result<BigInt> {
        same_rho(u, v)?;
        if u.rho() != self.rho {
            return Err(Error::DimensionMismatch {
                left: self.rho,
                right: u.rho(),
            });
        }
        let mut acc = BigInt::zero();
        for (i, ui) in u.coords().iter().enumerate() {
            for (j, vj) in v.coords().iter().enumerate() {
                acc += ui * vj * self.entry(i, j);
            }
        }
        Ok(acc)
    }

    /// `J⁻¹ = ½(I + 𝟙𝟙ᵗ/(2−ρ))`.
    pub fn inverse(&self) -> Vec<Vec<BigRational>> {
        let half = BigRational::new(1.into(), 2.into());
        let c = BigRational::new(1.into(), BigInt::from(2 - self.rho as i64));
        (0..self.rho)
            .map(|i| {
                (0..self.rho)
                    .map(|j| {
                        let diag = if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        };
                        &half * (diag + &c)
                    })
                    .collect()
            })
            .collect()
    }
}

/// `u⊙v` via the closed form.
pub fn dot(u: &LatticeVector, v: &LatticeVector) -> Result<BigInt> {
    same_rho(u, v)?;
    Ok(dot_unchecked(u, v))
}

pub(crate) fn dot_unchecked(u: &LatticeVector, v: &LatticeVector) -> BigInt {
    let mut inner = BigInt::zero();
    let mut su = BigInt::zero();
    let mut sv = BigInt::zero();
    for (a, b) in u.coords().iter().zip(v.coords()) {
        inner += a * b;
        su += a;
        sv += b;
    }
    inner * 2 - su * sv
}

pub fn dot_rational(u: &RationalVector, v: &RationalVector) -> BigRational {
    let mut inner = BigRational::zero();
    let mut su = BigRational::zero();
    let mut sv = BigRational::zero();
    for (a, b) in u.coords().iter().zip(v.coords()) {
        inner += a * b;
        su += a;
        sv += b;
    }
    inner * BigRational::from_integer(2.into()) - su * sv
}

pub fn dot_mixed(u: &LatticeVector, v: &RationalVector) -> BigRational {
    dot_rational(&u.to_rational(), v)
}

pub fn norm2(v: &LatticeVector) -> BigInt {
    dot_unchecked(v, v)
}

pub fn is_isotropic(v: &LatticeVector) -> bool {
    !v.is_zero() && norm2(v).is_zero()
}

/// Primitive representative of the ray through `v`, signed so that
/// `v⊙D < 0`; if `v⊙D = 0`, the first nonzero entry is made positive.
pub fn canonical_ray(v: &LatticeVector) -> LatticeVector {
    let p = v.primitive();
    let d = dot_unchecked(&p, &LatticeVector::ones(p.rho()));
    let flip = if d.is_zero() {
        p.coords()
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
    } else {
        d.is_positive()
    };
    if flip {
        -&p
    } else {
        p
    }
}

pub fn same_ray(a: &LatticeVector, b: &LatticeVector) -> bool {
    canonical_ray(a) == canonical_ray(b)
}

fn require_spacelike(n: &LatticeVector) -> Result<BigInt> {
    let nn = norm2(n);
    if nn.is_positive() {
        Ok(nn)
    } else {
        Err(Error::NotSpacelike(format!("{n} has self-product {nn}")))
    }
}

/// Reflection in the hyperplane `H_n`: `x − 2(n⊙x)/(n⊙n)·n`.
pub fn reflect(n: &LatticeVector, x: &LatticeVector) -> Result<RationalVector> {
    same_rho(n, x)?;
    let nn = require_spacelike(n)?;
    let k = BigRational::new(dot_unchecked(n, x) * 2, nn);
    Ok(x.to_rational().add_scaled(&-k, &n.to_rational()))
}

/// Reflection of a lattice vector that must land in the lattice.
pub fn reflect_integral(n: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
    reflect(n, x)?
        .to_lattice()
        .ok_or_else(|| Error::NonIntegral(n.to_string()))
}

/// An exact integer matrix acting on `Λ_ρ`, with the word of generator
/// labels it was built from.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    /// Row-major; column `j` is the image of `e_{j+1}`.
    matrix: Vec<Vec<BigInt>>,
    word: Vec<String>,
}

impl std::fmt::Debug for Isometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Isometry")
            .field("word", &self.word)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl Isometry {
    pub fn identity(rho: usize) -> Self {
        let matrix = (0..rho)
            .map(|i| {
                (0..rho)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self {
            matrix,
            word: Vec::new(),
        }
    }

    /// Builds the matrix whose columns are the given images of `e_1 … e_ρ`.
    pub fn from_columns(columns: &[LatticeVector], label: impl Into<String>) -> Self {
        let rho = columns.len();
        let matrix = (0..rho)
            .map(|i| columns.iter().map(|c| c.coords()[i].clone()).collect())
            .collect();
        Self {
            matrix,
            word: vec![label.into()],
        }
    }

    pub fn rho(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn word(&self) -> &[String] {
        &self.word
    }

    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        LatticeVector::from_coords_unchecked(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let n = self.rho();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.matrix[i][k] * &other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let mut word = other.word.clone();
        word.extend(self.word.iter().cloned());
        Isometry { matrix, word }
    }

    pub fn transpose(&self) -> Vec<Vec<BigInt>> {
        let n = self.rho();
        (0..n)
            .map(|i| (0..n).map(|j| self.matrix[j][i].clone()).collect())
            .collect()
    }

    /// `MᵗJM = J`, checked entrywise.
    pub fn preserves_form(&self) -> bool {
        let n = self.rho();
        let cols: Vec<LatticeVector> = (0..n)
            .map(|j| {
                LatticeVector::from_coords_unchecked(
                    (0..n).map(|i| self.matrix[i][j].clone()).collect(),
                )
            })
            .collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let expect = if i == j { 1 } else { -1 };
                dot_unchecked(&cols[i], &cols[j]) == BigInt::from(expect)
            })
        })
    }

    pub fn is_involution(&self) -> bool {
        let sq = self.compose(self);
        sq.matrix == Isometry::identity(self.rho()).matrix
    }

    /// `(M·D)⊙D < 0`: the future cone is preserved.
    pub fn preserves_future_cone(&self) -> bool {
        let d = LatticeVector::ones(self.rho());
        dot_unchecked(&self.apply(&d), &d).is_negative()
    }
}

/// The matrix of `R_n`; fails unless every entry is an integer.
pub fn reflection_matrix(n: &LatticeVector) -> Result<Isometry> {
    require_spacelike(n)?;
    let rho = n.rho();
    let columns = (1..=rho)
        .map(|i| reflect_integral(n, &LatticeVector::e(rho, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Isometry::from_columns(&columns, format!("R[{n}]")))
}

fn phi_preconditions(p: &LatticeVector, e: &LatticeVector) -> Result<BigInt> {
    same_rho(p, e)?;
    if !is_isotropic(p) {
        return Err(Error::NotIsotropic(p.to_string()));
    }
    if !is_isotropic(e) {
        return Err(Error::NotIsotropic(e.to_string()));
    }
    let pe = dot_unchecked(p, e);
    if pe.is_zero() {
        return Err(Error::Degenerate(format!("{p} ⊙ {e} = 0")));
    }
    Ok(pe)
}

/// `φ_{P,E}(x) = 2((P⊙x)E + (E⊙x)P)/(P⊙E) − x`, the −1 map centered at
/// `P` in the Euclidean structure with `E` at infinity.
pub fn phi_map(p: &LatticeVector, e: &LatticeVector, x: &LatticeVector) -> Result<RationalVector> {
    let pe = phi_preconditions(p, e)?;
    same_rho(p, x)?;
    let a = BigRational::new(dot_unchecked(p, x) * 2, pe.clone());
    let b = BigRational::new(dot_unchecked(e, x) * 2, pe);
    let xr = x.to_rational();
    Ok(xr
        .scale(&-BigRational::one())
        .add_scaled(&a, &e.to_rational())
        .add_scaled(&b, &p.to_rational()))
}

/// The matrix of `φ_{P,E}`; fails unless it is integral.
pub fn phi_matrix(p: &LatticeVector, e: &LatticeVector) -> Result<Isometry> {
    phi_preconditions(p, e)?;
    let rho = p.rho();
    let columns = (1..=rho)
        .map(|i| {
            phi_map(p, e, &LatticeVector::e(rho, i))?
                .to_lattice()
                .ok_or_else(|| Error::NonIntegral(format!("phi[{p};{e}]")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Isometry::from_columns(&columns, format!("phi[{p};{e}]")))
}

/// `(n⊙E)²/(n⊙n)`, defined for every spacelike `n`.
pub fn curvature_squared(n: &LatticeVector, e: &LatticeVector) -> Result<BigRational> {
    same_rho(n, e)?;
    let nn = require_spacelike(n)?;
    let ne = dot_unchecked(n, e);
    Ok(BigRational::new(&ne * &ne, nn))
}

/// `−(n⊙E)/|n|`, exact when `n⊙n` is a perfect square.
pub fn curvature(n: &LatticeVector, e: &LatticeVector) -> Result<BigRational> {
    same_rho(n, e)?;
    let nn = require_spacelike(n)?;
    let root = nn.sqrt();
    if &root * &root != nn {
        return Err(Error::NotPerfectSquare(nn.to_string()));
    }
    Ok(BigRational::new(-dot_unchecked(n, e), root))
}

/// Center of the hypersphere `H_{m,E}`: the ray of `R_m(E)`, returned as a
/// canonical ray representative.
pub fn center(m: &LatticeVector, e: &LatticeVector) -> Result<LatticeVector> {
    same_rho(m, e)?;
    let mm = norm2(m);
    if !mm.is_one() {
        return Err(Error::NotSpacelike(format!(
            "{m} has self-product {mm}, expected 1"
        )));
    }
    let me = dot_unchecked(m, e);
    if me.is_zero() {
        return Err(Error::CurvatureZero);
    }
    Ok(canonical_ray(&e.add_scaled(&(-me * 2), m)))
}

/// `|AB|_E² = −2 A⊙B / ((A⊙E)(B⊙E))`. Doubling `E` halves the result.
pub fn euclid_dist2(a: &LatticeVector, b: &LatticeVector, e: &LatticeVector) -> Result<BigRational> {
    same_rho(a, b)?;
    same_rho(a, e)?;
    for v in [a, b] {
        if !is_isotropic(v) {
            return Err(Error::NotIsotropic(v.to_string()));
        }
    }
    let ae = dot_unchecked(a, e);
    let be = dot_unchecked(b, e);
    if ae.is_zero() || be.is_zero() {
        return Err(Error::Degenerate("point coincides with E".into()));
    }
    Ok(BigRational::new(dot_unchecked(a, b) * -2, ae * be))
}

/// Rational basis of `{x ∈ span(span) : w⊙x = 0 for every wall}`, reduced
/// to linearly independent vectors.
pub fn solve_in_span(span: &[LatticeVector], walls: &[LatticeVector]) -> Vec<RationalVector> {
    let rows: Vec<Vec<BigRational>> = walls
        .iter()
        .map(|w| {
            span.iter()
                .map(|s| BigRational::from_integer(dot_unchecked(w, s)))
                .collect()
        })
        .collect();
    let coeffs = linalg::nullspace(&rows, span.len());
    let vectors: Vec<RationalVector> = coeffs
        .iter()
        .map(|c| {
            let rho = span[0].rho();
            let mut acc = RationalVector::new(vec![BigRational::zero(); rho]);
            for (ci, s) in c.iter().zip(span) {
                acc = acc.add_scaled(ci, &s.to_rational());
            }
            acc
        })
        .collect();
    independent_subset(&vectors)
}

fn independent_subset(vectors: &[RationalVector]) -> Vec<RationalVector> {
    let mut kept: Vec<RationalVector> = Vec::new();
    for v in vectors {
        let mut rows: Vec<Vec<BigRational>> = kept.iter().map(|k| k.coords().to_vec()).collect();
        rows.push(v.coords().to_vec());
        if linalg::rank(&rows, v.rho()) == rows.len() {
            kept.push(v.clone());
        }
    }
    kept
}

pub fn rank_of(vectors: &[LatticeVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| v.to_rational().coords().to_vec())
        .collect();
    linalg::rank(&rows, vectors[0].rho())
}

/// The standard basis `e_1 … e_ρ`, for solving over the whole space.
pub fn full_span(rho: usize) -> Vec<LatticeVector> {
    (1..=rho).map(|i| LatticeVector::e(rho, i)).collect()
}

/// Second isotropic ray of a 2-dimensional solution space that contains
/// the isotropic ray `known`.
///
/// Writing the space as `span{known, w}`, the isotropic combinations are
/// `known` itself and `w − (w⊙w)/(2·known⊙w)·known`.
pub fn isotropic_on_plane(
    span: &[LatticeVector],
    walls: &[LatticeVector],
    known: &LatticeVector,
) -> Result<LatticeVector> {
    if span.is_empty() {
        return Err(Error::Degenerate("empty span".into()));
    }
    for v in span.iter().chain(walls) {
        same_rho(known, v)?;
    }
    if !is_isotropic(known) {
        return Err(Error::NotIsotropic(known.to_string()));
    }
    let space = solve_in_span(span, walls);
    if space.len() != 2 {
        return Err(Error::Degenerate(format!(
            "solution space has dimension {}, expected 2",
            space.len()
        )));
    }
    let kr = known.to_rational();
    let mut with_known: Vec<Vec<BigRational>> = space.iter().map(|v| v.coords().to_vec()).collect();
    with_known.push(kr.coords().to_vec());
    if linalg::rank(&with_known, known.rho()) != 2 {
        return Err(Error::Degenerate(format!(
            "{known} does not lie in the solution space"
        )));
    }
    let w = space
        .iter()
        .find(|v| !v.clear_denominators().is_parallel(known))
        .expect("a 2-dimensional space has a vector off any ray");
    let kw = dot_rational(&kr, w);
    if kw.is_zero() {
        return Err(Error::Degenerate(format!("{known} ⊙ w = 0")));
    }
    let ww = dot_rational(w, w);
    let alpha = -ww / (kw * BigRational::from_integer(2.into()));
    let q = w.add_scaled(&alpha, &kr).clear_denominators();
    if q.is_zero() || q.is_parallel(known) {
        return Err(Error::Degenerate("second isotropic ray equals the known ray".into()));
    }
    Ok(canonical_ray(&q))
}

/// Midpoint of `A` and `B` in the Euclidean structure with `E` at infinity.
pub fn midpoint(a: &LatticeVector, b: &LatticeVector, e: &LatticeVector) -> Result<LatticeVector> {
    same_rho(a, b)?;
    same_rho(a, e)?;
    let ae = dot_unchecked(a, e);
    let be = dot_unchecked(b, e);
    if ae.is_zero() || be.is_zero() {
        return Err(Error::Degenerate("point coincides with E".into()));
    }
    let at = a.to_rational().scale(&BigRational::new(BigInt::from(-1), ae));
    let bt = b.to_rational().scale(&BigRational::new(BigInt::from(-1), be));
    let m0 = at.add_scaled(&BigRational::one(), &bt);
    let er = e.to_rational();
    let m0e = dot_rational(&m0, &er);
    let lambda = -dot_rational(&m0, &m0) / (m0e * BigRational::from_integer(2.into()));
    Ok(canonical_ray(&m0.add_scaled(&lambda, &er).clear_denominators()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_slice(c)
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&LatticeVector::e(4, 1), &LatticeVector::e(4, 1)).unwrap(), int(1));
        assert_eq!(dot(&LatticeVector::e(4, 1), &LatticeVector::e(4, 2)).unwrap(), int(-1));
        assert_eq!(dot(&LatticeVector::ones(4), &LatticeVector::ones(4)).unwrap(), int(-8));
        let u = lv(&[1, 0, -1, 1, 1]);
        assert_eq!(dot(&u, &u).unwrap(), int(4));
    }

    #[test]
    fn dot_rejects_mismatch() {
        assert_eq!(
            dot(&LatticeVector::e(4, 1), &LatticeVector::e(5, 1)),
            Err(Error::DimensionMismatch { left: 4, right: 5 })
        );
    }

    #[test]
    fn inverse_gram_is_inverse() {
        for rho in 4..=10 {
            let form = BilinearForm::new(rho).unwrap();
            let inv = form.inverse();
            for i in 0..rho {
                for j in 0..rho {
                    let s: BigRational = (0..rho)
                        .map(|k| BigRational::from_integer(form.entry(i, k).into()) * &inv[k][j])
                        .sum();
                    let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn reflect_examples() {
        let s2 = lv(&[1, -1, 1, 1]);
        let r = reflect(&s2, &LatticeVector::e(4, 2)).unwrap();
        assert_eq!(r.to_lattice().unwrap(), lv(&[2, -1, 2, 2]));
        assert_eq!(norm2(&lv(&[2, -1, 2, 2])), int(1));
        assert_eq!(reflect(&s2, &s2).unwrap().to_lattice().unwrap(), -&s2);
        let v45 = LatticeVector::v(5, 4, 5);
        assert_eq!(
            reflect(&v45, &LatticeVector::e(5, 4)).unwrap().to_lattice().unwrap(),
            LatticeVector::e(5, 5)
        );
    }

    #[test]
    fn reflect_rejects_non_spacelike() {
        let d = LatticeVector::ones(5);
        assert!(matches!(reflect(&d, &d), Err(Error::NotSpacelike(_))));
        let e = LatticeVector::strip_point(5);
        assert!(matches!(reflect(&e, &d), Err(Error::NotSpacelike(_))));
    }

    #[test]
    fn reflection_matrices() {
        let m = reflection_matrix(&LatticeVector::e(4, 4)).unwrap();
        assert!(m.preserves_form());
        assert!(m.is_involution());
        // u = e_1 − e_7 + E for ρ = 9.
        let u = &(&LatticeVector::e(9, 1) - &LatticeVector::e(9, 7)) + &LatticeVector::strip_point(9);
        let m = reflection_matrix(&u).unwrap();
        assert!(m.preserves_form() && m.is_involution() && m.preserves_future_cone());
    }

    #[test]
    fn viete_vector_is_not_integral_for_rho_6() {
        // s_3 ⊥ e_i for i ≠ 3: all ones except 3 − ρ at position 3.
        let s = lv(&[1, 1, -3, 1, 1, 1]);
        for i in [1, 2, 4, 5, 6] {
            assert!(dot(&s, &LatticeVector::e(6, i)).unwrap().is_zero());
        }
        // The independent check: 2(s⊙e_3)/(s⊙s) is not an integer.
        let k = BigRational::new(dot(&s, &LatticeVector::e(6, 3)).unwrap() * 2, norm2(&s));
        assert!(!k.is_integer());
        assert!(matches!(reflection_matrix(&s), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn phi_examples() {
        let p1 = lv(&[1, 1, 1, 1, 0, -1, -1, 1, 1]);
        let e = LatticeVector::strip_point(9);
        assert_eq!(phi_map(&p1, &e, &p1).unwrap().to_lattice().unwrap(), p1);
        assert_eq!(phi_map(&p1, &e, &e).unwrap().to_lattice().unwrap(), e);
        let m = phi_matrix(&p1, &e).unwrap();
        assert!(m.preserves_form() && m.is_involution() && m.preserves_future_cone());
    }

    #[test]
    fn phi_rejects_bad_input() {
        let e = LatticeVector::strip_point(5);
        assert!(matches!(
            phi_map(&LatticeVector::e(5, 1), &e, &e),
            Err(Error::NotIsotropic(_))
        ));
        assert!(matches!(phi_map(&e, &e, &e), Err(Error::Degenerate(_))));
    }

    #[test]
    fn curvature_examples() {
        let e9 = LatticeVector::strip_point(9);
        assert_eq!(curvature(&LatticeVector::e(9, 9), &e9).unwrap(), rat(0, 1));
        let e4 = LatticeVector::strip_point(4);
        assert_eq!(curvature(&LatticeVector::e(4, 1), &e4).unwrap(), rat(2, 1));
        assert_eq!(curvature(&lv(&[2, -1, 2, 2]), &e4).unwrap(), rat(2, 1));
        let w = lv(&[1, -1, 1, 0]); // self-product 5
        assert!(matches!(curvature(&w, &e4), Err(Error::NotPerfectSquare(_))));
        // w⊙E = 2·1 − 1·2 = 0
        assert_eq!(curvature_squared(&w, &e4).unwrap(), rat(0, 1));
        let w = lv(&[1, -1, 0, 1]); // self-product 5, w⊙E = 2 − 2 = 0
        assert_eq!(norm2(&w), int(5));
        let w = lv(&[2, 0, 0, 1]); // self-product 1, w⊙E = 2 − 6 = −4
        assert_eq!(curvature_squared(&w, &e4).unwrap(), rat(16, 1));
    }

    #[test]
    fn descartes_replacement_matches_curvature() {
        // Replacing the curvature 2 in (0,0,2,2) gives 2(0+0+2) − 2.
        let k = 2 * (2) - 2;
        let e4 = LatticeVector::strip_point(4);
        assert_eq!(curvature(&lv(&[2, -1, 2, 2]), &e4).unwrap(), rat(k, 1));
    }

    #[test]
    fn center_examples() {
        assert_eq!(
            center(&LatticeVector::e(4, 1), &LatticeVector::strip_point(4)).unwrap(),
            lv(&[4, 0, 1, 1])
        );
        assert_eq!(
            center(&LatticeVector::e(5, 1), &LatticeVector::strip_point(5)).unwrap(),
            lv(&[4, 0, 0, 1, 1])
        );
        assert_eq!(
            center(&LatticeVector::e(9, 9), &LatticeVector::strip_point(9)),
            Err(Error::CurvatureZero)
        );
    }

    #[test]
    fn euclid_dist2_examples() {
        let e = LatticeVector::strip_point(5);
        let q1p = lv(&[1, 0, 0, 0, 1]);
        assert!(euclid_dist2(&q1p, &q1p, &e).unwrap().is_zero());
        let b = reflect_integral(&LatticeVector::v(5, 4, 5), &q1p).unwrap();
        assert_eq!(b, lv(&[1, 0, 0, 1, 0]));
        // A⊙B = −2, A⊙E = B⊙E = −2: the two tangency points of e_1 are a
        // diameter apart, and e_1 has curvature 2.
        assert_eq!(euclid_dist2(&q1p, &b, &e).unwrap(), rat(1, 1));
        // Doubling E halves distances, so squared distances drop by 4.
        assert_eq!(euclid_dist2(&q1p, &b, &e.scale(&int(2))).unwrap(), rat(1, 4));
        assert!(matches!(
            euclid_dist2(&LatticeVector::e(5, 1), &b, &e),
            Err(Error::NotIsotropic(_))
        ));
    }

    #[test]
    fn isotropic_on_plane_rho9_q4() {
        let rho = 9;
        let e = LatticeVector::strip_point(rho);
        let mut walls: Vec<LatticeVector> = (1..=6)
            .filter(|&j| j != 4)
            .map(|j| LatticeVector::v(rho, j, j + 1))
            .collect();
        walls.push(&(&LatticeVector::e(rho, 1) - &LatticeVector::e(rho, 7)) + &e);
        walls.push(LatticeVector::v(rho, 8, 9));
        let q = isotropic_on_plane(&full_span(rho), &walls, &e).unwrap();
        assert_eq!(q, lv(&[16, 16, 16, 16, -12, -12, -12, 19, 19]));
        assert!(norm2(&q).is_zero());
        for w in &walls {
            assert!(dot(w, &q).unwrap().is_zero());
        }
    }

    #[test]
    fn isotropic_on_plane_rho5_q1_prime() {
        let rho = 5;
        let e = LatticeVector::strip_point(rho);
        let u = lv(&[1, 0, -1, 1, 1]);
        let walls = vec![LatticeVector::v(rho, 2, 3), u, LatticeVector::e(rho, 5)];
        let q = isotropic_on_plane(&full_span(rho), &walls, &e).unwrap();
        assert_eq!(q, lv(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn isotropic_on_plane_rejects_wrong_dimension() {
        let rho = 5;
        let e = LatticeVector::strip_point(rho);
        let walls = vec![LatticeVector::v(rho, 4, 5)];
        assert!(matches!(
            isotropic_on_plane(&full_span(rho), &walls, &e),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn midpoint_examples() {
        let e9 = LatticeVector::strip_point(9);
        let q4 = lv(&[16, 16, 16, 16, -12, -12, -12, 19, 19]);
        let q5 = lv(&[12, 12, 12, 12, 12, -16, -16, 15, 15]);
        let p1 = midpoint(&q4, &q5, &e9).unwrap();
        assert_eq!(p1, lv(&[1, 1, 1, 1, 0, -1, -1, 1, 1]));
        assert!(norm2(&p1).is_zero());
        assert_eq!(
            euclid_dist2(&q4, &p1, &e9).unwrap(),
            euclid_dist2(&q5, &p1, &e9).unwrap()
        );
    }
}
