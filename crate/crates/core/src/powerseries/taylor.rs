//! Taylor polynomials with Lagrange remainder enclosures.

use core::cmp::{max, min, Ordering};

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::powerseries::elementary;
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaylorTag {
    Exp,
    Sin,
    Cos,
    /// Taylor coefficients at `x₀` and a bound `B ≥ sup |f⁽ⁿ⁺¹⁾|` on the
    /// segments that will be queried.
    Custom {
        coeffs: Vec<Rational>,
        bound: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorApprox {
    pub tag: TaylorTag,
    pub x0: Rational,
    pub order: u32,
    /// `Tₙ` as a polynomial in `x − x₀`.
    pub poly: Poly,
}

/// `f(x) ∈ value`, `f(x) − Tₙ(x) ∈ remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderReport {
    pub tn: Rational,
    pub remainder: Enclosure,
    pub value: Enclosure,
    /// The remainder is strictly above `remainder.lo()`.
    pub lower_strict: bool,
    /// The remainder is strictly below `remainder.hi()`.
    pub upper_strict: bool,
}

/// Bits used for π and trig values inside derivative ranges.
const BITS: u32 = 96;

pub fn taylor_poly(tag: TaylorTag, x0: Rational, n: u32) -> Result<TaylorApprox> {
    let coeffs: Vec<Rational> = match &tag {
        TaylorTag::Custom { coeffs, .. } => (0..=n as usize).map(|k| coeffs.get(k).cloned().unwrap_or_default()).collect(),
        _ if !x0.is_zero() => {
            return Err(Error::InvalidParameter("standard Taylor tags are expanded at x0 = 0".into()));
        }
        TaylorTag::Exp => (0..=n as u64).map(|k| Rational::new(1.into(), rational::factorial(k))).collect(),
        TaylorTag::Sin | TaylorTag::Cos => {
            let odd = tag == TaylorTag::Sin;
            (0..=n as u64)
                .map(|k| {
                    if (k % 2 == 1) != odd {
                        return Rational::zero();
                    }
                    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                    Rational::new(sign.into(), rational::factorial(k))
                })
                .collect()
        }
    };
    Ok(TaylorApprox { tag, x0, order: n, poly: Poly::new(coeffs) })
}

impl TaylorApprox {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.poly.eval(&(x - &self.x0))
    }

    /// `Tₙ⁽ᵏ⁾(x₀) = k!·cₖ`.
    pub fn derivative_at_center(&self, k: u32) -> Rational {
        self.poly.coeff(k as usize) * Rational::from_integer(rational::factorial(k as u64))
    }

    /// Lagrange form `f⁽ⁿ⁺¹⁾(ξ)(x − x₀)ⁿ⁺¹/(n+1)!` with `ξ` strictly between
    /// `x₀` and `x`.
    pub fn remainder_enclosure(&self, x: &Rational) -> Result<RemainderReport> {
        let tn = self.eval(x);
        let h = x - &self.x0;
        if h.is_zero() {
            let p = Enclosure::point(tn.clone());
            return Ok(RemainderReport { tn, remainder: Enclosure::zero(), value: p, lower_strict: false, upper_strict: false });
        }
        let m = self.order + 1;
        let (lo, hi) = (min(&self.x0, x).clone(), max(&self.x0, x).clone());
        let deriv = self.derivative_range(m, &lo, &hi)?;
        let factor = rational::powi(&h, m as i64)? / Rational::from_integer(rational::factorial(m as u64));
        let remainder = deriv.range.scale(&factor);
        // Strict sign of f⁽ᵐ⁾ on the open segment carries over to the remainder.
        let (mut lower_strict, mut upper_strict) = (false, false);
        if let Some(sign) = deriv.strict_sign {
            let positive = (sign == Ordering::Greater) == factor.is_positive();
            if positive && remainder.lo().is_zero() {
                lower_strict = true;
            }
            if !positive && remainder.hi().is_zero() {
                upper_strict = true;
            }
        }
        let value = remainder.shift(&tn);
        Ok(RemainderReport { tn, remainder, value, lower_strict, upper_strict })
    }

    fn derivative_range(&self, m: u32, lo: &Rational, hi: &Rational) -> Result<DerivRange> {
        match &self.tag {
            TaylorTag::Custom { bound, .. } => Ok(DerivRange { range: Enclosure::new(-bound.abs(), bound.abs())?, strict_sign: None }),
            TaylorTag::Exp => {
                // e ≤ 3: e^t ≤ 3^⌈t⌉ for t ≥ 0, and e^t ≥ 1 + t
                let upper = if hi.is_positive() { rational::powi(&int(3), i64::try_from(rational::ceil(hi)).unwrap_or(i64::MAX))? } else { Rational::one() };
                let lower = if !lo.is_negative() {
                    Rational::one() + lo
                } else {
                    let k = i64::try_from(rational::ceil(&-lo)).unwrap_or(i64::MAX);
                    rational::powi(&int(3), -k)?
                };
                Ok(DerivRange { range: Enclosure::new(lower, upper)?, strict_sign: Some(Ordering::Greater) })
            }
            TaylorTag::Sin | TaylorTag::Cos => {
                // dᵐ/dxᵐ sin = sin shifted by m quarter turns
                let shift = (m + if self.tag == TaylorTag::Cos { 1 } else { 0 }) % 4;
                let (use_cos, negate) = match shift {
                    0 => (false, false),
                    1 => (true, false),
                    2 => (false, true),
                    _ => (true, true),
                };
                let r = trig_range(use_cos, lo, hi)?;
                Ok(if negate { DerivRange { range: -&r.range, strict_sign: r.strict_sign.map(Ordering::reverse) } } else { r })
            }
        }
    }
}

struct DerivRange {
    range: Enclosure,
    /// Sign of the derivative on the open segment, when constant.
    strict_sign: Option<Ordering>,
}

/// Range of `sin` (or `cos`) over `[lo, hi]`, plus its sign on `(lo, hi)`
/// when no zero can lie inside.
fn trig_range(use_cos: bool, lo: &Rational, hi: &Rational) -> Result<DerivRange> {
    let f = |t: &Rational| if use_cos { elementary::cos(t, BITS) } else { elementary::sin(t, BITS) };
    let (fa, fb) = (f(lo)?, f(hi)?);
    let mut range = fa.hull(&fb);
    let pi = elementary::pi(BITS);
    let half_pi = pi.scale(&rational::rat(1, 2));
    // zeros at jπ (+π/2 for cos), extrema at jπ + π/2 (−π/2 for cos)
    let zero_offset = if use_cos { half_pi.clone() } else { Enclosure::zero() };
    let extremum_offset = if use_cos { Enclosure::zero() } else { half_pi };
    let j_range = |offset: &Enclosure| -> (i64, i64) {
        let a = rational::floor(&((lo - offset.hi()) / pi.lo())) - 1;
        let b = rational::ceil(&((hi - offset.lo()) / pi.lo())) + 1;
        (i64::try_from(a).unwrap_or(i64::MIN / 2), i64::try_from(b).unwrap_or(i64::MAX / 2))
    };
    let (ja, jb) = j_range(&extremum_offset);
    for j in ja..=jb {
        let point = &pi.scale(&int(j)) + &extremum_offset;
        if point.hi() >= lo && point.lo() <= hi {
            let v = if j.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
            range = range.hull(&Enclosure::point(v));
        }
    }
    let (za, zb) = j_range(&zero_offset);
    let mut zero_inside = false;
    for j in za..=zb {
        let point = &pi.scale(&int(j)) + &zero_offset;
        let outside = point.hi() <= lo || point.lo() >= hi;
        if !outside {
            zero_inside = true;
        }
        if point.contains(lo) || point.contains(hi) {
            range = range.hull(&Enclosure::zero());
        }
    }
    let strict_sign = if zero_inside {
        None
    } else {
        let mid = f(&((lo + hi) / int(2)))?;
        mid.sign().filter(|s| *s != Ordering::Equal)
    };
    let one = Rational::one();
    let clipped = Enclosure::new(max(range.lo().clone(), -one.clone()), min(range.hi().clone(), one))?;
    Ok(DerivRange { range: clipped, strict_sign })
}
