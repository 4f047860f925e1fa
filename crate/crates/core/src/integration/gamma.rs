//! `Γ(s) = ∫₀^∞ t^{s−1} e^{−t} dt` for rational `s > 0`.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::accumulator::SumAccumulator;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::powerseries::elementary;
use crate::rational::{self, int, Rational};

/// `Γ(s)` with width at most `10^-d`.
///
/// Reduces to `r ∈ (0, 1]` through `Γ(s+1) = sΓ(s)`, then splits at `T`:
/// the head `∫₀ᵀ` is the alternating series `T^r Σ (−T)ᵏ/(k!(r+k))` and
/// the tail is at most `2e^{−T/2}` because `t^{r−1} ≤ 1` for `t ≥ 1`.
pub fn gamma(s: &Rational, d: u32) -> Result<Enclosure> {
    if !s.is_positive() {
        return Err(Error::Domain { function: "gamma", at: s.to_string() });
    }
    let m = rational::ceil(s) - 1;
    let m = u64::try_from(m).map_err(|_| Error::InvalidParameter("argument too large".into()))?;
    let r = s - Rational::from_integer(BigInt::from(m));
    let mut factor = Rational::one();
    for j in 0..m {
        factor *= &r + int(j as i64);
    }
    let target = rational::ten_pow_neg(d) / core::cmp::max(factor.clone(), Rational::one());
    Ok(base(&r, &target)?.scale(&factor))
}

fn base(r: &Rational, width: &Rational) -> Result<Enclosure> {
    let quarter = width / int(4);
    let bits = 8 + rational::ceil(&(width.recip())).bits() as u32;
    // smallest T = 2^j with 2e^{−T/2} ≤ width/4
    let mut t_pow = 3u32;
    let tail = loop {
        let t = Rational::from_integer(rational::pow2(t_pow));
        let tail = elementary::exp(&(-&t / int(2)), bits + 8)?.hi() * int(2);
        if tail <= quarter {
            break tail;
        }
        t_pow += 1;
    };
    let t = Rational::from_integer(rational::pow2(t_pow));
    let tr = {
        let (lo, hi) = rational::rational_pow_bracket(&t, r, bits + 2 * t_pow + 16)?;
        Enclosure::new(lo, hi)?
    };
    // terms uₖ = Tᵏ/(k!(r+k)) decrease once k + 1 > T
    let mut acc = SumAccumulator::new();
    let mut power_over_fact = Rational::one();
    let mut k: u64 = 0;
    let bound = loop {
        let u = &power_over_fact / (r + int(k as i64));
        if k % 2 == 0 {
            acc.add(&u);
        } else {
            acc.sub(&u);
        }
        power_over_fact = power_over_fact * &t / int(k as i64 + 1);
        k += 1;
        let next = &power_over_fact / (r + int(k as i64));
        if Rational::from_integer(BigInt::from(k)) > t && &next * tr.hi() <= quarter {
            break next;
        }
    };
    let head = acc.to_rational();
    let series = Enclosure::new(&head - &bound, &head + &bound)?;
    let integral = &tr * &series;
    let lo = core::cmp::max(integral.lo().clone(), Rational::zero());
    Enclosure::new(lo, integral.hi() + tail)
}
