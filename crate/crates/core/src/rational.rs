//! Exact rational numbers.
//!
//! `Rational` is `num_rational::BigRational`: every value is kept in lowest
//! terms with a positive denominator. This module adds the constructors,
//! parsing, rounding and root-bracketing helpers the certified kernels need.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` from machine integers. Panics when `d == 0`; use [`try_ratio`] for
/// untrusted input.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn try_ratio(n: BigInt, d: BigInt) -> Result<Rational> {
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

pub fn recip(x: &Rational) -> Result<Rational> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(x.recip())
}

pub fn pow10(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), d as usize)
}

pub fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// `x^e` for any integer exponent; `0^e` with `e < 0` is a division by zero.
pub fn powi(x: &Rational, e: i64) -> Result<Rational> {
    if e >= 0 {
        Ok(num_traits::pow(x.clone(), e as usize))
    } else {
        let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
        recip(&p)
    }
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Largest multiple of `1/den` not exceeding `x`.
pub fn floor_to(x: &Rational, den: &BigInt) -> Rational {
    Rational::new(floor(&(x * Rational::from_integer(den.clone()))), den.clone())
}

/// Smallest multiple of `1/den` not below `x`.
pub fn ceil_to(x: &Rational, den: &BigInt) -> Rational {
    Rational::new(ceil(&(x * Rational::from_integer(den.clone()))), den.clone())
}

pub fn dyadic_floor(x: &Rational, bits: u32) -> Rational {
    if x.denom().trailing_zeros() == Some(x.denom().bits() - 1) && x.denom().bits() <= bits as u64 + 1 {
        return x.clone();
    }
    floor_to(x, &pow2(bits))
}

pub fn dyadic_ceil(x: &Rational, bits: u32) -> Rational {
    if x.denom().trailing_zeros() == Some(x.denom().bits() - 1) && x.denom().bits() <= bits as u64 + 1 {
        return x.clone();
    }
    ceil_to(x, &pow2(bits))
}

/// `10^-d` as a rational.
pub fn ten_pow_neg(d: u32) -> Rational {
    Rational::new(BigInt::one(), pow10(d))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient `C(alpha, k)` for rational `alpha`.
pub fn binomial_rational(alpha: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (alpha - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Rational brackets `lo ≤ x^(1/n) ≤ hi` with `hi - lo ≤ 2^-bits`; both ends
/// coincide when the root is itself rational at that resolution.
pub fn nth_root_bracket(x: &Rational, n: u32, bits: u32) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::InvalidParameter("root index must be positive".into()));
    }
    if x.is_negative() {
        return Err(Error::Domain { function: "nth_root", at: x.to_string() });
    }
    if x.is_zero() || n == 1 {
        return Ok((x.clone(), x.clone()));
    }
    // x^(1/n) = (p q^(n-1))^(1/n) / q, scaled by 2^bits before the integer root.
    let p = x.numer();
    let q = x.denom();
    let scaled = (p * num_traits::pow(q.clone(), (n - 1) as usize)) << (bits as usize * n as usize);
    let r = scaled.nth_root(n);
    let den = q * pow2(bits);
    let lo = Rational::new(r.clone(), den.clone());
    if num_traits::pow(r.clone(), n as usize) == scaled {
        return Ok((lo.clone(), lo));
    }
    Ok((lo, Rational::new(r + 1, den)))
}

/// Rational brackets of `x^e` for a rational exponent `e = a/b` and `x > 0`.
pub fn rational_pow_bracket(x: &Rational, e: &Rational, bits: u32) -> Result<(Rational, Rational)> {
    if !x.is_positive() {
        return Err(Error::Domain { function: "rational_pow", at: x.to_string() });
    }
    let b = u32::try_from(e.denom().clone()).map_err(|_| Error::InvalidParameter(format!("exponent denominator too large: {e}")))?;
    let a = i64::try_from(e.numer().clone()).map_err(|_| Error::InvalidParameter(format!("exponent numerator too large: {e}")))?;
    let base = powi(x, a.abs())?;
    if a >= 0 {
        return nth_root_bracket(&base, b, bits);
    }
    let target = Rational::new(BigInt::one(), pow2(bits));
    let mut work = bits + 8;
    loop {
        let (lo, hi) = nth_root_bracket(&base, b, work)?;
        if lo.is_positive() {
            let (rlo, rhi) = (hi.recip(), lo.recip());
            if &rhi - &rlo <= target {
                return Ok((rlo, rhi));
            }
        }
        work += 32;
    }
}

/// Parses `7`, `-3/4`, `0.125`, `1e-3`, `2.5E+2`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let fail = |position: usize| Error::Parse { input: input.to_string(), position };
    if s.is_empty() {
        return Err(fail(0));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_decimal(n.trim(), input, 0)?;
        let den = parse_decimal(d.trim(), input, n.len() + 1)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(num / den);
    }
    parse_decimal(s, input, 0).map_err(|e| match e {
        Error::Parse { position, .. } => fail(position),
        other => other,
    })
}

fn parse_decimal(s: &str, input: &str, offset: usize) -> Result<Rational> {
    let fail = |position: usize| Error::Parse { input: input.to_string(), position: offset + position };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp_str = &s[i + 1..];
            let exp: i64 = exp_str.parse().map_err(|_| fail(i + 1))?;
            if exp.abs() > 100_000 {
                return Err(fail(i + 1));
            }
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let sign_len = mantissa.len() - digits.len();
    if digits.is_empty() {
        return Err(fail(sign_len));
    }
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail(sign_len));
    }
    let mut value = BigInt::zero();
    for (i, c) in int_part.chars().chain(frac_part.chars()).enumerate() {
        let d = c.to_digit(10).ok_or_else(|| {
            let pos = if i < int_part.len() { sign_len + i } else { sign_len + i + 1 };
            fail(pos)
        })?;
        value = value * 10u32 + d;
    }
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    Ok(Rational::from_integer(value) * powi(&ten, scale)?)
}

/// Decimal string of `x` rounded toward `-∞` to `digits` fractional digits.
pub fn decimal_floor(x: &Rational, digits: u32) -> String {
    format_scaled(floor(&(x * Rational::from_integer(pow10(digits)))), digits)
}

/// Decimal string of `x` rounded toward `+∞` to `digits` fractional digits.
pub fn decimal_ceil(x: &Rational, digits: u32) -> String {
    format_scaled(ceil(&(x * Rational::from_integer(pow10(digits)))), digits)
}

/// Decimal string of `x` rounded half away from zero.
pub fn decimal_nearest(x: &Rational, digits: u32) -> String {
    let scaled = x * Rational::from_integer(pow10(digits));
    let half = rat(1, 2);
    let v = if scaled.is_negative() { -floor(&(-scaled + half)) } else { floor(&(scaled + half)) };
    format_scaled(v, digits)
}

fn format_scaled(v: BigInt, digits: u32) -> String {
    let negative = v.sign() == Sign::Minus;
    let mut s = v.abs().to_string();
    let d = digits as usize;
    if d > 0 {
        if s.len() <= d {
            s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
        }
        s.insert(s.len() - d, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// `p/q` rendering used in reports (`7` for integers).
pub fn exact_string(x: &Rational) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
