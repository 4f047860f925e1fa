//! Decimal-precision enclosures of named real constants and functions.

use core::fmt;

use num_bigint::BigInt;

use crate::enclosure::Enclosure;
use crate::error::Result;
use crate::powerseries::elementary;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealFn {
    Sqrt(Rational),
    Exp(Rational),
    Ln(Rational),
    Sin(Rational),
    Cos(Rational),
    Pi,
}

impl fmt::Display for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealFn::Sqrt(q) => write!(f, "sqrt({q})"),
            RealFn::Exp(q) => write!(f, "exp({q})"),
            RealFn::Ln(q) => write!(f, "ln({q})"),
            RealFn::Sin(q) => write!(f, "sin({q})"),
            RealFn::Cos(q) => write!(f, "cos({q})"),
            RealFn::Pi => write!(f, "pi"),
        }
    }
}

/// Binary digits that resolve `10^-d / 8`.
fn bits_for_digits(d: u32) -> u32 {
    (d as u64 * 3322 / 1000) as u32 + 5
}

fn raw(f: &RealFn, bits: u32) -> Result<Enclosure> {
    match f {
        RealFn::Sqrt(q) => elementary::sqrt(q, bits),
        RealFn::Exp(q) => elementary::exp(q, bits),
        RealFn::Ln(q) => elementary::ln(q, bits),
        RealFn::Sin(q) => elementary::sin(q, bits),
        RealFn::Cos(q) => elementary::cos(q, bits),
        RealFn::Pi => Ok(elementary::pi(bits)),
    }
}

/// Enclosure of width at most `10^-d`.
///
/// Results are nested in `d`: the enclosure for `d + 1` lies inside the one
/// for `d`. Exactly representable values come back as points.
pub fn approx_real(f: &RealFn, d: u32) -> Result<Enclosure> {
    let e = raw(f, bits_for_digits(d))?;
    if e.is_point() {
        return Ok(e);
    }
    // grid g = 10^-d/8; snap outward then pad by one grid step
    let den = rational::pow10(d) * BigInt::from(8);
    let g = Rational::new(BigInt::from(1), den.clone());
    let lo = rational::floor_to(e.lo(), &den) - &g;
    let hi = rational::ceil_to(e.hi(), &den) + &g;
    Enclosure::new(lo, hi)
}
