//! Classical constants as certified enclosures indexed by a horizon `n`.

use num_bigint::BigInt;
use num_traits::One;

use crate::accumulator::SumAccumulator;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::powerseries::elementary;
use crate::rational::{self, int, rat, Rational};
use crate::sequences::TermStream;
use crate::series::alternating_sum_with_bound;

/// `sₙ = Σ_{k≤n} 1/k!`.
pub fn exp_partial(n: u64) -> Rational {
    let mut acc = SumAccumulator::new();
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        acc.add(&Rational::new(BigInt::one(), fact.clone()));
    }
    acc.to_rational()
}

/// `e ∈ [sₙ, sₙ + 1/(n·n!)]`; the width is below `3/(n+1)!`.
pub fn e(n: u64) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let s = exp_partial(n);
    let tail = Rational::new(BigInt::one(), rational::factorial(n) * n);
    Enclosure::new(s.clone(), s + tail)
}

/// Enclosure of `n!e − n!sₙ`, which lies strictly inside `(0, 1/n)`.
pub fn nfact_e_gap(n: u64) -> Result<Enclosure> {
    let m = n + 12;
    let fact = Rational::from_integer(rational::factorial(n));
    let base = (exp_partial(m) - exp_partial(n)) * &fact;
    let slack = fact / Rational::from_integer(rational::factorial(m) * m);
    Enclosure::new(base.clone(), base + slack)
}

/// `ln 2` from the alternating harmonic series after `n` terms.
pub fn ln2(n: u64) -> Result<Enclosure> {
    let b = TermStream::exact("1/n", 1, |k| rat(1, k as i64));
    alternating_sum_with_bound(&b, n)
}

/// `π/4` from the Newton–Gregory series after `n` terms.
pub fn pi_over_4(n: u64) -> Result<Enclosure> {
    let b = TermStream::exact("1/(2n-1)", 1, |k| rat(1, 2 * k as i64 - 1));
    alternating_sum_with_bound(&b, n)
}

/// Euler's constant with the horizon data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    /// `[Hₙ − ln(n+1), Hₙ − ln n]`.
    pub enclosure: Enclosure,
    /// `cₙ − c₂ₙ` with `cₙ = Hₙ − ln n`, an enclosure.
    pub gap: Enclosure,
    pub n: u64,
}

const FIX: u32 = 100;

/// `Hₙ` in 100-bit fixed point, rounded down and up.
fn harmonic_fixed(n: u64) -> (Rational, Rational) {
    let one: u128 = 1 << FIX;
    let (mut lo, mut hi) = (0u128, 0u128);
    for k in 1..=n as u128 {
        let q = one / k;
        lo += q;
        hi += if q * k == one { q } else { q + 1 };
    }
    let den = BigInt::from(1u8) << FIX;
    (Rational::new(BigInt::from(lo), den.clone()), Rational::new(BigInt::from(hi), den))
}

pub fn euler_gamma(n: u64) -> Result<GammaReport> {
    if n == 0 || n > 1 << 40 {
        return Err(Error::InvalidParameter("horizon must lie in [1, 2^40]".into()));
    }
    let bits = FIX + 8;
    let ln_of = |k: u64| elementary::ln(&int(k as i64), bits);
    let (h_lo, h_hi) = harmonic_fixed(n);
    let (ln_n, ln_n1) = (ln_of(n)?, ln_of(n + 1)?);
    let enclosure = Enclosure::new(&h_lo - ln_n1.hi(), &h_hi - ln_n.lo())?;
    let (h2_lo, h2_hi) = harmonic_fixed(2 * n);
    let ln_2n = ln_of(2 * n)?;
    let c_n = Enclosure::new(&h_lo - ln_n.hi(), &h_hi - ln_n.lo())?;
    let c_2n = Enclosure::new(&h2_lo - ln_2n.hi(), &h2_hi - ln_2n.lo())?;
    Ok(GammaReport { enclosure, gap: &c_n - &c_2n, n })
}

/// `e^{-γ}` from a γ enclosure.
pub fn exp_neg_gamma(gamma: &Enclosure) -> Result<Enclosure> {
    elementary::exp_enclosure(&-gamma, FIX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    #[test]
    fn e_width_and_value() {
        let enc = e(20).unwrap();
        assert!(enc.width() <= int(3) / Rational::from_integer(rational::factorial(21)));
        assert!(enc.contains(&parse_rational("2.71828182845904523536").unwrap()));
        assert_eq!(rational::decimal_floor(enc.lo(), 15), "2.718281828459045");
        assert_eq!(rational::decimal_ceil(enc.hi(), 15), "2.718281828459046");
        for n in [5u64, 10] {
            let g = nfact_e_gap(n).unwrap();
            assert!(g.lo() > &Rational::from_integer(0.into()));
            assert!(g.hi() < &rat(3, n as i64 + 1));
        }
    }

    #[test]
    fn alternating_constants() {
        let l = ln2(10_000).unwrap();
        assert!(l.width() <= rat(2, 10_000));
        assert!(l.contains(&parse_rational("0.693147").unwrap()));
        assert!(pi_over_4(10_000).unwrap().contains(&parse_rational("0.785398").unwrap()));
    }

    #[test]
    fn gamma_small_horizon() {
        let g = euler_gamma(1000).unwrap();
        assert!(g.enclosure.contains(&parse_rational("0.5772156649").unwrap()));
        assert!(g.enclosure.width() <= rat(1, 1000));
        assert!(g.gap.is_positive());
        assert!(euler_gamma(0).is_err());
    }
}
