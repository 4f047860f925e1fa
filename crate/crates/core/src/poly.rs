//! Dense rational polynomials, ascending coefficients.

use core::fmt;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x`.
    pub fn identity() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Interval Horner; an outer enclosure of the range over `x`.
    pub fn eval_enclosure(&self, x: &Enclosure) -> Enclosure {
        self.coeffs.iter().rev().fold(Enclosure::zero(), |acc, c| (&acc * x).shift(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational::zero()];
        out.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / int(k as i64 + 1)));
        Poly::new(out)
    }

    pub fn definite_integral(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// `p(s·x + t)`.
    pub fn compose_affine(&self, s: &Rational, t: &Rational) -> Poly {
        let inner = Poly::new(vec![t.clone(), s.clone()]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(&inner).add(&Poly::constant(c.clone())))
    }

    /// All rational roots, or `None` when the coefficients are too large to
    /// enumerate divisor candidates.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut out = Vec::new();
        let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
            return Some(out);
        };
        if low > 0 {
            out.push(Rational::zero());
        }
        let a0 = i64::try_from(ints[low].abs()).ok()?;
        let an = i64::try_from(ints.last()?.abs()).ok()?;
        if a0 > 1 << 40 || an > 1 << 40 {
            return None;
        }
        for p in divisors(a0) {
            for q in divisors(an) {
                for sign in [1, -1] {
                    let x = Rational::new(BigInt::from(sign * p), BigInt::from(q));
                    if self.eval(&x).is_zero() && !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Zero::is_zero)
    }
}

fn divisors(n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::string::ToString;

    #[test]
    fn calculus_round_trip() {
        let p = Poly::from_ints(&[0, 6, -1]);
        assert_eq!(p.derivative(), Poly::from_ints(&[6, -2]));
        assert_eq!(p.antiderivative().derivative(), p);
        assert_eq!(p.definite_integral(&int(0), &int(6)), int(36));
        assert_eq!(Poly::from_ints(&[0, 0, 1]).definite_integral(&int(1), &int(4)), int(21));
    }

    #[test]
    fn affine_composition() {
        let p = Poly::from_ints(&[0, 0, 1]);
        let q = p.compose_affine(&int(2), &int(1));
        assert_eq!(q, Poly::from_ints(&[1, 4, 4]));
        assert_eq!(q.eval(&rat(1, 2)), int(4));
    }

    #[test]
    fn interval_horner_contains_values() {
        let p = Poly::from_ints(&[1, 6, 0, 0, 0, 0, 1]);
        let x = Enclosure::new(int(-1), int(0)).unwrap();
        let e = p.eval_enclosure(&x);
        for k in 0..=10 {
            let t = rat(-k, 10);
            assert!(e.contains(&p.eval(&t)));
        }
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, -6, 0, 1]).to_string(), "1 - 6*x + x^3");
    }
}
