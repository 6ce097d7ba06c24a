//! Exact arithmetic in a real quadratic field `ℚ(√d)`.
//!
//! Line–sphere intersections in the boundary model are roots of a
//! quadratic, so ideal points such as the dome crossings `P_{4i}` carry
//! coordinates `a + b√d`. Only signs and comparisons of such numbers are
//! ever needed, and both are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::lorentz::{dot_mixed, dot_rational};
use crate::vector::{LatticeVector, RationalVector};

#[derive(Clone, PartialEq, Eq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    /// Radicand, shared by every operand in an expression.
    pub d: BigRational,
}

impl Surd {
    pub fn rational(a: BigRational, d: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.d.is_zero()
    }

    /// `√r` for a non-negative rational `r`, written `b√d` with `d` a
    /// square-free integer (up to factors beyond the trial-division bound).
    ///
    /// Panics if `r` is negative.
    pub fn sqrt(r: &BigRational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        let zero = BigRational::zero();
        if r.is_zero() {
            return Self::rational(zero.clone(), zero);
        }
        // √(p/q) = √(pq)/q.
        let n = r.numer() * r.denom();
        let (outer, inner) = split_square(&n);
        let b = BigRational::new(outer, r.denom().clone());
        if inner == BigInt::from(1) {
            Self::rational(b, zero)
        } else {
            Self {
                a: zero,
                b,
                d: BigRational::from_integer(inner),
            }
        }
    }

    /// Rewrites `self` over radicand `d`, which must be a rational multiple
    /// square of the current one (or `self` must be rational).
    pub fn with_radicand(&self, d: &BigRational) -> Self {
        if self.is_rational() {
            return Self::rational(self.a.clone(), d.clone());
        }
        assert_eq!(&self.d, d, "mixed radicands");
        self.clone()
    }

    pub fn signum(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = if self.d.is_zero() { 0 } else { rat_sign(&self.b) };
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with b²d.
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// `a² − b²d`, which is rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }
}

/// Writes `n = outer² · inner` with `inner` free of small square factors.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut inner = n.clone();
    let mut outer = BigInt::from(1);
    let mut p = BigInt::from(2);
    let bound = BigInt::from(1_000_000);
    while &p * &p <= inner && p <= bound {
        let sq = &p * &p;
        while (&inner % &sq).is_zero() {
            inner /= &sq;
            outer *= &p;
        }
        p += 1;
    }
    let r = inner.sqrt();
    if &r * &r == inner {
        outer *= r;
        inner = BigInt::from(1);
    }
    (outer, inner)
}

fn rat_sign(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum().cmp(&0))
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.d)
        }
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        Surd {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            d: self.d,
        }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        Surd {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            d: self.d,
        }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        Surd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * &self.d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d: self.d,
        }
    }
}

impl Div for Surd {
    type Output = Surd;
    /// Panics on division by zero.
    fn div(self, rhs: Surd) -> Surd {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in ℚ(√d)");
        let num = self * rhs.conjugate();
        Surd {
            a: num.a / &n,
            b: num.b / &n,
            d: num.d,
        }
    }
}

/// A point `base + t·dir` with `t = t0 + t1·√d`.
///
/// Coordinates are `base_i + t0·dir_i + t1·dir_i·√d`.
#[derive(Clone, PartialEq, Eq)]
pub struct SurdVector {
    rational: RationalVector,
    irrational: RationalVector,
    d: BigRational,
}

impl SurdVector {
    pub fn from_rational(v: RationalVector) -> Self {
        let rho = v.rho();
        Self {
            rational: v,
            irrational: RationalVector::new(vec![BigRational::zero(); rho]),
            d: BigRational::zero(),
        }
    }

    pub fn along(base: &RationalVector, dir: &RationalVector, t: &Surd) -> Self {
        Self {
            rational: base.add_scaled(&t.a, dir),
            irrational: dir.scale(&t.b),
            d: t.d.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero() || self.d.is_zero()
    }

    pub fn radicand(&self) -> &BigRational {
        &self.d
    }

    /// `self + k·v`.
    pub fn add_scaled(&self, k: &Surd, v: &RationalVector) -> Self {
        let d = if self.is_rational() { k.d.clone() } else { self.d.clone() };
        let k = k.with_radicand(&d);
        Self {
            rational: self.rational.add_scaled(&k.a, v),
            irrational: self.irrational.add_scaled(&k.b, v),
            d,
        }
    }

    pub fn rational_part(&self) -> &RationalVector {
        &self.rational
    }

    /// The primitive integer ray when the point is rational.
    pub fn to_lattice_ray(&self) -> Option<LatticeVector> {
        self.is_rational()
            .then(|| crate::lorentz::canonical_ray(&self.rational.clear_denominators()))
    }

    pub fn dot_lattice(&self, v: &LatticeVector) -> Surd {
        Surd {
            a: dot_mixed(v, &self.rational),
            b: dot_mixed(v, &self.irrational),
            d: self.d.clone(),
        }
    }

    pub fn self_dot(&self) -> Surd {
        let two = BigRational::from_integer(BigInt::from(2));
        let rr = dot_rational(&self.rational, &self.rational);
        let ii = dot_rational(&self.irrational, &self.irrational);
        let ri = dot_rational(&self.rational, &self.irrational);
        Surd {
            a: rr + ii * &self.d,
            b: ri * two,
            d: self.d.clone(),
        }
    }

    pub fn negate(&self) -> Self {
        let m1 = -BigRational::from_integer(BigInt::from(1));
        Self {
            rational: self.rational.scale(&m1),
            irrational: self.irrational.scale(&m1),
            d: self.d.clone(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        let sd = self.d.to_f64().unwrap_or(0.0).sqrt();
        self.rational
            .coords()
            .iter()
            .zip(self.irrational.coords())
            .map(|(a, b)| a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN) * sd)
            .collect()
    }
}

impl fmt::Debug for SurdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SurdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_lattice_ray() {
            write!(f, "{v}")
        } else {
            write!(f, "({}) + √{}·({})", self.rational, self.d, self.irrational)
        }
    }
}
