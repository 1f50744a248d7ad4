//! Exact arithmetic in `Z/p^s`.
//!
//! A [`Modulus`] carries `p`, `s` and the cached order `p^s`. The hot paths in
//! the linear algebra work on raw canonical representatives through the
//! `Modulus` helpers (`add`, `mul`, ...); [`ResidueElement`] is the checked,
//! self-describing value type used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible order; keeps every product below 2^124 in `u128`.
const MAX_ORDER: u64 = 1 << 62;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawModulus", into = "RawModulus")]
pub struct Modulus {
    p: u64,
    s: u32,
    order: u64,
}

#[derive(Serialize, Deserialize)]
struct RawModulus {
    p: u64,
    s: u32,
}

impl TryFrom<RawModulus> for Modulus {
    type Error = Error;
    fn try_from(raw: RawModulus) -> Result<Self> {
        Modulus::new(raw.p, raw.s)
    }
}

impl From<Modulus> for RawModulus {
    fn from(m: Modulus) -> Self {
        RawModulus { p: m.p, s: m.s }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Modulus {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut order: u64 = 1;
        for _ in 0..s {
            order = order
                .checked_mul(p)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or(Error::ModulusTooLarge { p, s })?;
        }
        Ok(Modulus { p, s, order })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.s
    }

    /// `p^s`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `p^e` as a canonical representative (zero when `e >= s`).
    pub fn power(&self, e: u32) -> u64 {
        if e >= self.s {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// `p^e` as an integer, without reduction. Requires `e <= s`.
    pub fn int_power(&self, e: u32) -> u64 {
        debug_assert!(e <= self.s);
        self.p.pow(e)
    }

    /// The same prime with a different exponent.
    pub fn with_exponent(&self, s: u32) -> Result<Self> {
        Modulus::new(self.p, s)
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.order as i64) as u64
    }

    #[inline]
    pub fn reduce_u64(&self, x: u64) -> u64 {
        x % self.order
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let r = a + b;
        if r >= self.order {
            r - self.order
        } else {
            r
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.order - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.order - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.order <= u32::MAX as u64 {
            (a * b) % self.order
        } else {
            ((a as u128 * b as u128) % self.order as u128) as u64
        }
    }

    /// `a - q * b`.
    #[inline]
    pub fn sub_mul(&self, a: u64, q: u64, b: u64) -> u64 {
        self.sub(a, self.mul(q, b))
    }

    /// Exponent of the largest power of `p` dividing `a`, or `None` for zero.
    #[inline]
    pub fn valuation_raw(&self, a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.p == 2 {
            return Some(a.trailing_zeros());
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Multiplicative inverse of a unit representative.
    pub fn inverse_raw(&self, a: u64) -> Option<u64> {
        let (mut old_r, mut r) = (a as i128, self.order as i128);
        let (mut old_t, mut t) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_t, t) = (t, old_t - q * t);
        }
        if old_r != 1 {
            return None;
        }
        Some(old_t.rem_euclid(self.order as i128) as u64)
    }

    pub fn element(&self, value: u64) -> ResidueElement {
        ResidueElement {
            value: value % self.order,
            modulus: *self,
        }
    }

    pub fn from_i64(&self, value: i64) -> ResidueElement {
        ResidueElement {
            value: self.reduce_i64(value),
            modulus: *self,
        }
    }

    pub fn zero(&self) -> ResidueElement {
        self.element(0)
    }

    pub fn one(&self) -> ResidueElement {
        self.element(1)
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.s)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.s)
    }
}

/// p-adic valuation of a residue; zero has valuation [`Valuation::Infinite`].
///
/// The derived order puts every finite valuation below `Infinite`, which is
/// what pivot selection relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// An element of `Z/p^s`, always stored as its canonical representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    value: u64,
    modulus: Modulus,
}

impl ResidueElement {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        modulus.element(value)
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn valuation(&self) -> Valuation {
        match self.modulus.valuation_raw(self.value) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit {
                value: self.value,
                modulus: self.modulus,
            });
        }
        let inv = self
            .modulus
            .inverse_raw(self.value)
            .expect("valuation-0 residues are invertible");
        Ok(self.modulus.element(inv))
    }

    /// Image under `Z/p^s -> Z/p^t` for `1 <= t <= s`.
    pub fn reduce(&self, t: u32) -> Result<Self> {
        if t == 0 || t > self.modulus.s {
            return Err(Error::ReductionOutOfRange {
                from: self.modulus.s,
                to: t,
            });
        }
        let target = self.modulus.with_exponent(t)?;
        Ok(target.element(self.value))
    }

    pub fn try_add(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self + rhs)
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        self.check(&rhs)?;
        Ok(self * rhs)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus, rhs.modulus));
        }
        Ok(())
    }

    pub fn pow(self, mut e: u64) -> Self {
        let m = self.modulus;
        let mut base = self.value;
        let mut acc = m.reduce_u64(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = m.mul(acc, base);
            }
            base = m.mul(base, base);
            e >>= 1;
        }
        m.element(acc)
    }
}

impl fmt::Debug for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.modulus.p, self.modulus.s)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $raw:ident) => {
        impl $trait for ResidueElement {
            type Output = ResidueElement;
            fn $method(self, rhs: Self) -> Self {
                assert_eq!(
                    self.modulus, rhs.modulus,
                    "residues with different moduli cannot be combined"
                );
                ResidueElement {
                    value: self.modulus.$raw(self.value, rhs.value),
                    modulus: self.modulus,
                }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for ResidueElement {
    type Output = ResidueElement;
    fn neg(self) -> Self {
        ResidueElement {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}
