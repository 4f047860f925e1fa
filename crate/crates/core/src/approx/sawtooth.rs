//! The sawtooth series `f = Σ_{n≥0} h_{4^{−n}}`, continuous and nowhere differentiable.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// `h_m(x) = |x|` on `[−m, m]`, extended with period `2m`.
pub fn h(m: &Rational, x: &Rational) -> Rational {
    let period = m * int(2);
    let k = rational::floor(&(x / &period));
    let r = x - &period * Rational::from_integer(k);
    if &r <= m {
        r
    } else {
        period - r
    }
}

/// `4^{−n}`.
pub fn scale(n: u32) -> Rational {
    Rational::new(BigInt::one(), rational::pow2(2 * n))
}

/// `gₙ = h_{4^{−n}}`.
pub fn layer(n: u32, x: &Rational) -> Rational {
    h(&scale(n), x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SawtoothSeries {
    levels: u32,
}

impl SawtoothSeries {
    /// Truncation level cap `N`; evaluation sums layers `0..=N`.
    pub fn new(levels: u32) -> Result<Self> {
        if levels > 512 {
            return Err(Error::InvalidParameter(format!("level cap {levels} exceeds 512")));
        }
        Ok(SawtoothSeries { levels })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `Σ_{n≤k} gₙ(x)`.
    pub fn partial(&self, k: u32, x: &Rational) -> Rational {
        (0..=k).map(|n| layer(n, x)).sum()
    }

    /// `Σ_{n>N} 4^{−n} = 4^{−N}/3`.
    pub fn truncation_bound(&self) -> Rational {
        scale(self.levels) / int(3)
    }

    /// `f(x)`: exact at dyadic points, where all layers past some level
    /// vanish, and `[S_N, S_N + 4^{−N}/3]` elsewhere.
    pub fn eval(&self, x: &Rational) -> Enclosure {
        if let Some(first) = first_vanishing_layer(x).filter(|n| *n <= 4096) {
            return Enclosure::point(if first == 0 { Rational::zero() } else { self.partial(first - 1, x) });
        }
        let s = self.partial(self.levels, x);
        let hi = &s + self.truncation_bound();
        Enclosure::spanning(s, hi)
    }
}

/// For `x = p/2ʲ`, the first level `n` with `x ∈ 2·4^{−n}ℤ`; every later layer is 0 at `x`.
fn first_vanishing_layer(x: &Rational) -> Option<u32> {
    let d = x.denom();
    let j = d.bits() - 1;
    if d.trailing_zeros() != Some(j) {
        return None;
    }
    let j = u32::try_from(j).ok()?;
    // 4ⁿx/2 ∈ ℤ ⇔ 2n − 1 ≥ j, and x ∈ 2ℤ for n = 0
    if j == 0 {
        let n = x.numer();
        return Some(if (n % BigInt::from(2)).is_zero() { 0 } else { 1 });
    }
    Some(j.div_ceil(2) + u32::from(j % 2 == 0))
}

/// One side choice for level `k`: `x_k = x₀ ± 4^{−k}/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub x: Rational,
    /// `(S_k(x_k) − S_k(x₀))/(x_k − x₀)`; layers past `k` cancel exactly.
    pub quotient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLevel {
    pub k: u32,
    /// Both sides are listed when both half-intervals avoid lattice points.
    pub sides: Vec<Side>,
}

/// Difference quotients `c_k` along the side-selection rule: for level `k`
/// with `ℓ = 4^{−k}`, the half-interval `[x₀ − ℓ/2, x₀]` or `[x₀, x₀ + ℓ/2]`
/// lying inside one cell `[nℓ, (n+1)ℓ]` is used.
pub fn nowhere_diff_quotients(ss: &SawtoothSeries, x0: &Rational, k_max: u32) -> Result<Vec<QuotientLevel>> {
    if k_max > ss.levels {
        return Err(Error::InvalidParameter(format!("K = {k_max} exceeds the level cap {}", ss.levels)));
    }
    let mut out = Vec::new();
    for k in 0..=k_max {
        let ell = scale(k);
        let q = x0 / &ell;
        let frac = &q - Rational::from_integer(rational::floor(&q));
        let half = rational::rat(1, 2);
        let mut offsets = Vec::new();
        if frac.is_zero() || frac >= half {
            offsets.push(-&ell / int(2));
        }
        if frac <= half {
            offsets.push(&ell / int(2));
        }
        let base = ss.partial(k, x0);
        let sides = offsets
            .into_iter()
            .map(|dx| {
                let x = x0 + &dx;
                let quotient = (ss.partial(k, &x) - &base) / &dx;
                Side { x, quotient }
            })
            .collect();
        out.push(QuotientLevel { k, sides });
    }
    Ok(out)
}
