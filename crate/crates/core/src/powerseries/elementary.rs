//! Elementary functions at rational arguments as dyadic enclosures.
//!
//! Each routine sums a Taylor or `atanh`/`atan` series with an explicit tail
//! bound, then rounds outward to `2^-bits`. Widths are checked and the
//! working precision is raised until `width ≤ 2^-bits`.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::accumulator::SumAccumulator;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

fn target(bits: u32) -> Rational {
    Rational::new(BigInt::one(), rational::pow2(bits))
}

/// Repeats `f(work)` with growing working precision until the width target
/// is met.
fn refine(bits: u32, mut f: impl FnMut(u32) -> Result<Enclosure>) -> Result<Enclosure> {
    let t = target(bits);
    let mut work = bits + 16;
    for _ in 0..12 {
        let e = f(work)?;
        if e.width() <= t {
            return Ok(e);
        }
        work = work * 3 / 2 + 32;
    }
    Err(Error::InvalidParameter("precision target unreachable".into()))
}

fn bit_length(x: &Rational) -> u64 {
    let n = x.numer().abs().bits();
    let d = x.denom().bits();
    n.saturating_sub(d) + 1
}

/// Σ_{k<n} y^k/k! for |y| ≤ 1/2 with the remainder `2|y|^n/n!`.
fn exp_small(y: &Rational, work: u32) -> Enclosure {
    let eps = target(work + 4);
    let mut acc = SumAccumulator::new();
    let mut term = Rational::one();
    let mut k = 0i64;
    loop {
        acc.add(&term);
        k += 1;
        term = term * y / int(k);
        if term.abs() * int(2) <= eps {
            break;
        }
    }
    let tail = term.abs() * int(2);
    acc.to_enclosure(work + 2).widen(&tail).round_outward(work)
}

/// `e^x`.
pub fn exp(x: &Rational, bits: u32) -> Result<Enclosure> {
    if x.is_zero() {
        return Ok(Enclosure::point(Rational::one()));
    }
    let k = (bit_length(x) + 4) as u32;
    let y = x / Rational::from_integer(rational::pow2(k));
    let growth = if x.is_positive() { u32::try_from(rational::ceil(x)).unwrap_or(u32::MAX / 4).saturating_mul(3) / 2 + 2 } else { 0 };
    refine(bits, |work| {
        let w = work + k + growth;
        let mut e = exp_small(&y, w);
        for _ in 0..k {
            e = (&e * &e).round_outward(w);
        }
        Ok(e.round_outward(bits + 2))
    })
}

/// `2·atanh(z) = 2 Σ z^(2k+1)/(2k+1)` for `|z| ≤ 1/3`.
fn two_atanh(z: &Rational, work: u32) -> Enclosure {
    let eps = target(work + 4);
    let z2 = z * z;
    let mut acc = SumAccumulator::new();
    let mut power = z.clone();
    let mut k = 0i64;
    loop {
        acc.add(&(&power / int(2 * k + 1)));
        k += 1;
        power = &power * &z2;
        let next = power.abs() / int(2 * k + 1);
        // geometric tail: next / (1 - z²) ≤ next · 9/8
        if &next * rat(9, 8) <= eps {
            let tail = next * rat(9, 4);
            return acc.to_enclosure(work + 2).scale(&int(2)).widen(&tail).round_outward(work);
        }
    }
}

/// `ln 2 = 2·atanh(1/3)`.
pub fn ln2(bits: u32) -> Enclosure {
    refine(bits, |w| Ok(two_atanh(&rat(1, 3), w))).unwrap_or_else(|_| two_atanh(&rat(1, 3), bits * 2))
}

/// `ln(1 + t)` for `|t| ≤ 1/2`, with width at most `|t|·2^-bits`.
pub fn ln1p(t: &Rational, bits: u32) -> Result<Enclosure> {
    if t.abs() > rat(1, 2) {
        return Err(Error::Domain { function: "ln1p", at: t.to_string() });
    }
    if t.is_zero() {
        return Ok(Enclosure::zero());
    }
    let z = t / (int(2) + t);
    let scale = (z.denom().bits() - z.numer().magnitude().bits()) as u32 + 1;
    Ok(two_atanh(&z, bits + scale))
}

/// Natural logarithm for `x > 0`.
pub fn ln(x: &Rational, bits: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain { function: "ln", at: x.to_string() });
    }
    if x.is_one() {
        return Ok(Enclosure::zero());
    }
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = int(2);
    let m = loop {
        let m = x / rational::powi(&two, e)?;
        if m > rat(4, 3) {
            e += 1;
        } else if m < rat(2, 3) {
            e -= 1;
        } else {
            break m;
        }
    };
    let z = (&m - int(1)) / (&m + int(1));
    let scale = (e.unsigned_abs().max(1)).ilog2() + 2;
    refine(bits, |w| {
        let tail = two_atanh(&z, w + 2);
        let head = if e == 0 { Enclosure::zero() } else { two_atanh(&rat(1, 3), w + scale + 2).scale(&int(e)) };
        Ok((&head + &tail).round_outward(bits + 2))
    })
}

/// Σ_{k<n} (-1)^k c^(2k+parity)/(2k+parity)! with the Lagrange bound
/// `|c|^m/m!` on the first omitted power.
fn sin_cos_series(c: &Rational, odd: bool, work: u32) -> Enclosure {
    let eps = target(work + 4);
    let mut acc = SumAccumulator::new();
    let (mut power, mut index) = if odd { (c.clone(), 1i64) } else { (Rational::one(), 0i64) };
    let mut sign = true;
    let c2 = c * c;
    loop {
        let term = &power / Rational::from_integer(rational::factorial(index as u64));
        if sign {
            acc.add(&term);
        } else {
            acc.sub(&term);
        }
        sign = !sign;
        power = &power * &c2;
        index += 2;
        let bound = power.abs() / Rational::from_integer(rational::factorial(index as u64));
        if bound <= eps {
            return acc.to_enclosure(work + 2).widen(&bound).round_outward(work);
        }
    }
}

/// Reduces `x` modulo `2π` to a dyadic center `c` with `|c| ≤ 4` and a
/// radius `h` so that `x - 2πj ∈ [c - h, c + h]`.
fn reduce_two_pi(x: &Rational, work: u32) -> (Rational, Rational) {
    if x.abs() <= int(3) {
        return (x.clone(), Rational::zero());
    }
    let approx_j = rational::floor(&(x / rat(710, 113) / int(2) + rat(1, 2)));
    let j = Rational::from_integer(approx_j.clone());
    let extra = (approx_j.bits() as u32) + 4;
    let two_pi = pi(work + extra).scale(&int(2));
    let r = Enclosure::point(x.clone()) - two_pi.scale(&j);
    let c = rational::dyadic_floor(&r.midpoint(), work + 2);
    let h = core::cmp::max((r.lo() - &c).abs(), (r.hi() - &c).abs());
    (c, h)
}

pub fn sin(x: &Rational, bits: u32) -> Result<Enclosure> {
    if x.is_zero() {
        return Ok(Enclosure::zero());
    }
    refine(bits, |w| {
        let (c, h) = reduce_two_pi(x, w);
        Ok(clamp_unit(sin_cos_series(&c, true, w).widen(&h).round_outward(bits + 2)))
    })
}

pub fn cos(x: &Rational, bits: u32) -> Result<Enclosure> {
    if x.is_zero() {
        return Ok(Enclosure::point(Rational::one()));
    }
    refine(bits, |w| {
        let (c, h) = reduce_two_pi(x, w);
        Ok(clamp_unit(sin_cos_series(&c, false, w).widen(&h).round_outward(bits + 2)))
    })
}

fn clamp_unit(e: Enclosure) -> Enclosure {
    let one = Rational::one();
    let lo = core::cmp::max(e.lo().clone(), -one.clone());
    let hi = core::cmp::min(e.hi().clone(), one);
    Enclosure::new(lo, hi).unwrap_or(e)
}

/// `atan(1/n)` by its alternating series: consecutive partial sums bracket
/// the value.
fn atan_inv(n: i64, work: u32) -> Enclosure {
    let eps = target(work + 4);
    let n2 = int(n * n);
    let mut acc = SumAccumulator::new();
    let mut power = rat(1, n);
    let mut k = 0i64;
    loop {
        let term = &power / int(2 * k + 1);
        if k % 2 == 0 {
            acc.add(&term);
        } else {
            acc.sub(&term);
        }
        k += 1;
        power = &power / &n2;
        let next = &power / int(2 * k + 1);
        if next <= eps {
            return acc.to_enclosure(work + 2).widen(&next).round_outward(work);
        }
    }
}

/// `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi(bits: u32) -> Enclosure {
    let w = bits + 8;
    (&atan_inv(5, w).scale(&int(16)) - &atan_inv(239, w).scale(&int(4))).round_outward(bits + 1)
}

pub fn sqrt(x: &Rational, bits: u32) -> Result<Enclosure> {
    let (lo, hi) = rational::nth_root_bracket(x, 2, bits)?;
    Enclosure::new(lo, hi)
}

/// `e^x` over an enclosure of arguments.
pub fn exp_enclosure(x: &Enclosure, bits: u32) -> Result<Enclosure> {
    let lo = exp(x.lo(), bits)?;
    let hi = if x.is_point() { lo.clone() } else { exp(x.hi(), bits)? };
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}

/// `ln x` over an enclosure of positive arguments.
pub fn ln_enclosure(x: &Enclosure, bits: u32) -> Result<Enclosure> {
    let lo = ln(x.lo(), bits)?;
    let hi = if x.is_point() { lo.clone() } else { ln(x.hi(), bits)? };
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}

/// `√x` over an enclosure of nonnegative arguments.
pub fn sqrt_enclosure(x: &Enclosure, bits: u32) -> Result<Enclosure> {
    let lo = sqrt(x.lo(), bits)?;
    let hi = if x.is_point() { lo.clone() } else { sqrt(x.hi(), bits)? };
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}
