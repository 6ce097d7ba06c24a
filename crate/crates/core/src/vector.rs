//! Integer and rational coordinate vectors in the tangent-sphere basis
//! `e_1, …, e_ρ`.
//!
//! The text format is a comma-separated list of integers, e.g.
//! `16,16,16,16,-12,-12,-12,19,19`; ρ is the arity.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_RHO: usize = 4;
pub const MAX_RHO: usize = 10;

pub fn check_rho(rho: usize) -> Result<()> {
    if (MIN_RHO..=MAX_RHO).contains(&rho) {
        Ok(())
    } else {
        Err(Error::RhoOutOfRange(rho))
    }
}

/// An exact integer ρ-tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        check_rho(coords.len())?;
        Ok(Self { coords })
    }

    /// Builds a vector from machine integers.
    ///
    /// Panics if the arity is outside `4..=10`.
    pub fn from_slice(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
            .expect("arity must lie in 4..=10")
    }

    pub fn zero(rho: usize) -> Self {
        Self {
            coords: vec![BigInt::zero(); rho],
        }
    }

    /// The basis vector `e_i`, with `i` counted from 1.
    pub fn e(rho: usize, i: usize) -> Self {
        assert!((1..=rho).contains(&i), "basis index {i} out of 1..={rho}");
        let mut v = Self::zero(rho);
        v.coords[i - 1] = BigInt::one();
        v
    }

    /// `e_i - e_j`, 1-based.
    pub fn v(rho: usize, i: usize, j: usize) -> Self {
        &Self::e(rho, i) - &Self::e(rho, j)
    }

    /// `D = e_1 + … + e_ρ`, the fixed timelike reference vector.
    pub fn ones(rho: usize) -> Self {
        Self {
            coords: vec![BigInt::one(); rho],
        }
    }

    /// The strip perspective `E = e_{ρ-1} + e_ρ`.
    pub fn strip_point(rho: usize) -> Self {
        &Self::e(rho, rho - 1) + &Self::e(rho, rho)
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn rho(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// 1-based coordinate access.
    pub fn get(&self, i: usize) -> &BigInt {
        &self.coords[i - 1]
    }

    pub fn sum(&self) -> BigInt {
        self.coords.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the gcd of the entries; the zero vector is returned as is.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self {
            coords: self.coords.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &BigInt, other: &Self) -> Self {
        debug_assert_eq!(self.rho(), other.rho());
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    /// True when `other` is a nonzero multiple of `self` (of either sign).
    pub fn is_parallel(&self, other: &Self) -> bool {
        if self.rho() != other.rho() || self.is_zero() || other.is_zero() {
            return false;
        }
        for i in 0..self.rho() {
            for j in (i + 1)..self.rho() {
                if &self.coords[i] * &other.coords[j] != &self.coords[j] * &other.coords[i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector {
            coords: self
                .coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coords
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for LatticeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parse_err = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        let coords = trimmed
            .split(',')
            .map(|tok| {
                // Accept the unicode minus sign as well.
                let tok = tok.trim().replace('\u{2212}', "-");
                tok.parse::<BigInt>()
                    .map_err(|_| parse_err(format!("{tok:?} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords).map_err(|e| parse_err(e.to_string()))
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;

    fn add(self, rhs: Self) -> LatticeVector {
        debug_assert_eq!(self.rho(), rhs.rho());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;

    fn sub(self, rhs: Self) -> LatticeVector {
        debug_assert_eq!(self.rho(), rhs.rho());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;

    fn neg(self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// An exact rational ρ-tuple, used for intermediate solves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn rho(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add_scaled(&self, k: &BigRational, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    /// The integer vector if every entry is integral.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.coords.iter().all(BigRational::is_integer) {
            Some(LatticeVector::from_coords_unchecked(
                self.coords.iter().map(BigRational::to_integer).collect(),
            ))
        } else {
            None
        }
    }

    /// The primitive integer vector on the same ray (positive multiple).
    pub fn clear_denominators(&self) -> LatticeVector {
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        LatticeVector::from_coords_unchecked(ints).primitive()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Sign of a big integer as -1, 0, 1.
pub(crate) fn signum(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
