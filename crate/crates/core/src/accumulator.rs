//! Exact running sums without a gcd reduction per term.
//!
//! Long sums such as harmonic partial sums keep an unreduced `num/den` pair
//! where `den` is the running lcm of the term denominators.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::enclosure::Enclosure;
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct SumAccumulator {
    num: BigInt,
    den: BigInt,
}

impl Default for SumAccumulator {
    fn default() -> Self {
        SumAccumulator { num: BigInt::zero(), den: BigInt::one() }
    }
}

impl SumAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rational(x: &Rational) -> Self {
        SumAccumulator { num: x.numer().clone(), den: x.denom().clone() }
    }

    pub fn add(&mut self, x: &Rational) {
        let d = x.denom();
        if d.is_one() {
            self.num += x.numer() * &self.den;
            return;
        }
        let g = if self.den.bits() > d.bits() { d.gcd(&(&self.den % d)) } else { self.den.gcd(d) };
        let mult_self = d / &g;
        let mult_x = &self.den / &g;
        self.num = &self.num * &mult_self + x.numer() * mult_x;
        self.den *= mult_self;
    }

    pub fn sub(&mut self, x: &Rational) {
        self.add(&-x);
    }

    /// Exact comparison against `x`.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        (&self.num * x.denom()).cmp(&(x.numer() * &self.den))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Reduced value.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num.clone(), self.den.clone())
    }

    /// Outward dyadic enclosure with `bits` fractional bits.
    pub fn to_enclosure(&self, bits: u32) -> Enclosure {
        let scaled = &self.num << bits as usize;
        let (q, r) = scaled.div_mod_floor(&self.den);
        let den = rational::pow2(bits);
        let lo = Rational::new(q.clone(), den.clone());
        if r.is_zero() {
            return Enclosure::point(lo);
        }
        Enclosure::spanning(lo, Rational::new(q + 1, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn matches_reduced_arithmetic() {
        let mut acc = SumAccumulator::new();
        let mut exact = Rational::zero();
        for n in 1..200i64 {
            let t = rat(if n % 2 == 0 { -1 } else { 1 }, n);
            acc.add(&t);
            exact += t;
            assert_eq!(acc.cmp_rational(&exact), Ordering::Equal);
        }
        assert_eq!(acc.to_rational(), exact);
        assert!(acc.to_enclosure(40).contains(&exact));
        acc.sub(&exact);
        assert!(acc.is_zero());
        acc.add(&int(3));
        assert_eq!(acc.to_enclosure(8), Enclosure::point(int(3)));
    }
}
