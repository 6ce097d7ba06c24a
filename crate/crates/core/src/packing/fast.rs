//! Machine-integer vectors for the enumeration hot loop.
//!
//! Orbit elements at desk-scale curvature bounds have small entries, so
//! the search runs on fixed-size `i64` arrays with checked arithmetic and
//! converts to [`LatticeVector`] at the boundary. Overflow is an error,
//! never a wrap.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::vector::{LatticeVector, MAX_RHO};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FastVec {
    len: u8,
    c: [i64; MAX_RHO],
}

impl std::fmt::Debug for FastVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

fn overflow() -> Error {
    Error::Degenerate("machine-integer overflow in orbit search".into())
}

impl FastVec {
    pub fn from_lattice(v: &LatticeVector) -> Result<Self> {
        let mut c = [0i64; MAX_RHO];
        for (slot, x) in c.iter_mut().zip(v.coords()) {
            *slot = x.to_i64().ok_or_else(overflow)?;
        }
        Ok(Self { len: v.rho() as u8, c })
    }

    pub fn to_lattice(&self) -> LatticeVector {
        LatticeVector::new(self.coords().iter().map(|&x| BigInt::from(x)).collect())
            .expect("arity already checked")
    }

    pub fn rho(&self) -> usize {
        self.len as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.rho()]
    }

    fn sum(&self) -> Option<i64> {
        self.coords().iter().try_fold(0i64, |a, &x| a.checked_add(x))
    }

    /// `u⊙v = 2Σu_iv_i − ΣuΣv`.
    pub fn dot(&self, other: &Self) -> Result<i64> {
        let mut s = 0i64;
        for (a, b) in self.coords().iter().zip(other.coords()) {
            s = s.checked_add(a.checked_mul(*b).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        let su = self.sum().ok_or_else(overflow)?;
        let sv = other.sum().ok_or_else(overflow)?;
        s.checked_mul(2)
            .and_then(|t| t.checked_sub(su.checked_mul(sv)?))
            .ok_or_else(overflow)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: i64, other: &Self) -> Result<Self> {
        let mut out = *self;
        for (o, b) in out.c[..self.rho()].iter_mut().zip(other.coords()) {
            *o = o.checked_add(k.checked_mul(*b).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        Ok(out)
    }

    /// Row-major integer matrix times vector.
    pub fn mat_apply(m: &[i64], v: &Self) -> Result<Self> {
        let rho = v.rho();
        let mut out = Self { len: v.len, c: [0; MAX_RHO] };
        for i in 0..rho {
            let mut s = 0i64;
            for j in 0..rho {
                s = s
                    .checked_add(m[i * rho + j].checked_mul(v.c[j]).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            out.c[i] = s;
        }
        Ok(out)
    }
}
