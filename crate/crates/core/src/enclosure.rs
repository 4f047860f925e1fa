//! Closed rational intervals `[lo, hi]` guaranteed to contain a real value.

use core::cmp::{max, min, Ordering};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

/// Binary combination supported by [`combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Add,
    Sub,
}

/// `op(a, b)` over all `x ∈ a`, `y ∈ b`.
pub fn combine(a: &Enclosure, b: &Enclosure, op: Combine) -> Enclosure {
    match op {
        Combine::Add => a + b,
        Combine::Sub => a - b,
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedEnclosure);
        }
        Ok(Self { lo, hi })
    }

    /// Orders the two ends.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    /// `center ± radius` for `radius ≥ 0`.
    pub fn ball(center: &Rational, radius: &Rational) -> Self {
        let r = radius.abs();
        Self { lo: center - &r, hi: center + &r }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_point(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `self ⊆ outer`.
    pub fn is_subset_of(&self, outer: &Enclosure) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = max(&self.lo, &other.lo).clone();
        let hi = min(&self.hi, &other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: min(&self.lo, &other.lo).clone(), hi: max(&self.hi, &other.hi).clone() }
    }

    pub fn hull_all<'a, I: IntoIterator<Item = &'a Enclosure>>(items: I) -> Option<Enclosure> {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.hull(e)))
    }

    /// Widens both ends by `r ≥ 0`.
    pub fn widen(&self, r: &Rational) -> Enclosure {
        let r = r.abs();
        Enclosure { lo: &self.lo - &r, hi: &self.hi + &r }
    }

    /// Multiplication by a scalar of either sign.
    pub fn scale(&self, c: &Rational) -> Enclosure {
        Enclosure::spanning(&self.lo * c, &self.hi * c)
    }

    /// `c·[lo, hi]` for `c ≥ 0`.
    pub fn scale_nonneg(&self, c: &Rational) -> Result<Enclosure> {
        if c.is_negative() {
            return Err(Error::InvalidParameter("scale factor must be nonnegative".into()));
        }
        Ok(Enclosure { lo: &self.lo * c, hi: &self.hi * c })
    }

    pub fn shift(&self, c: &Rational) -> Enclosure {
        Enclosure { lo: &self.lo + c, hi: &self.hi + c }
    }

    /// `Some(ordering of every member against 0)` when decided.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_nonneg(&self) -> bool {
        !self.lo.is_negative()
    }

    /// Compares every member of `self` with every member of `other`.
    pub fn compare(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `{|x| : x ∈ self}`.
    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure { lo: Rational::zero(), hi: max(-&self.lo, self.hi.clone()) }
        }
    }

    /// Largest magnitude of any member.
    pub fn mag(&self) -> Rational {
        max(self.lo.abs(), self.hi.abs())
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return Err(Error::DivisionByZero);
        }
        Ok(Enclosure { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, e: u32) -> Enclosure {
        if e == 0 {
            return Enclosure::point(Rational::one());
        }
        let base = if e % 2 == 0 { self.abs() } else { self.clone() };
        Enclosure { lo: num_traits::pow(base.lo.clone(), e as usize), hi: num_traits::pow(base.hi, e as usize) }
    }

    /// Rounds both ends outward onto the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Enclosure {
        Enclosure { lo: rational::dyadic_floor(&self.lo, bits), hi: rational::dyadic_ceil(&self.hi, bits) }
    }

    /// Rounds outward only when an endpoint denominator exceeds `2^bits`.
    pub fn compact(self, bits: u32) -> Enclosure {
        let limit = u64::from(bits);
        if self.lo.denom().bits() > limit || self.hi.denom().bits() > limit {
            self.round_outward(bits)
        } else {
            self
        }
    }

    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        (rational::decimal_floor(&self.lo, digits), rational::decimal_ceil(&self.hi, digits))
    }

    /// Sum over a slice with outward rounding after every step.
    pub fn sum_rounded<'a, I: IntoIterator<Item = &'a Enclosure>>(items: I, bits: u32) -> Enclosure {
        items.into_iter().fold(Enclosure::zero(), |acc, e| (&acc + e).round_outward(bits))
    }

    pub fn ends(&self) -> Vec<Rational> {
        alloc::vec![self.lo.clone(), self.hi.clone()]
    }
}

impl From<Rational> for Enclosure {
    fn from(x: Rational) -> Self {
        Enclosure::point(x)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo }
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        if self.is_nonneg() && rhs.is_nonneg() {
            return Enclosure { lo: &self.lo * &rhs.lo, hi: &self.hi * &rhs.hi };
        }
        let products = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        Enclosure { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}
