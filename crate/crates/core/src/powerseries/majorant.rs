//! Geometric domination data `|cₙ| R₂ⁿ ≤ M` for certified evaluation.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Majorant {
    /// `|cₙ| R₂ⁿ ≤ M` for every `n`.
    Fixed {
        m: Rational,
        r2: Rational,
    },
    /// `|cₙ| ≤ 1/n!`.
    Entire,
    /// Finitely many nonzero coefficients.
    Finite(Vec<Rational>),
    Binomial(Rational),
    Derive(Box<Majorant>),
    /// Term-wise antiderivative with the given constant term.
    Integrate(Box<Majorant>, Rational),
    Product(Box<Majorant>, Box<Majorant>),
}

/// `max_n (n+1) ρⁿ` for `0 ≤ ρ < 1`; the sequence decreases once
/// `(n+2) ρ ≤ n+1`.
fn linear_weight_max(rho: &Rational) -> Rational {
    let mut best = Rational::one();
    let mut power = Rational::one();
    let mut n = 0i64;
    loop {
        n += 1;
        power = &power * rho;
        let v = &power * int(n + 1);
        if v > best {
            best = v;
        }
        if int(n + 2) * rho <= int(n + 1) {
            return best;
        }
    }
}

impl Majorant {
    /// `(M, R₂)` with `R₂ > reach`, or `None` when no such pair is known.
    pub fn dominate(&self, reach: &Rational) -> Result<Option<(Rational, Rational)>> {
        match self {
            Majorant::Fixed { m, r2 } => Ok((r2 > reach).then(|| (m.clone(), r2.clone()))),
            Majorant::Entire => {
                let r2 = Rational::from_integer(rational::floor(&(reach * int(2))) + 1);
                let k = rational::floor(&r2);
                let k = u64::try_from(k).map_err(|_| Error::InvalidParameter("reach too large".into()))?;
                let m = rational::powi(&r2, k as i64)? / Rational::from_integer(rational::factorial(k));
                Ok(Some((core::cmp::max(m, Rational::one()), r2)))
            }
            Majorant::Finite(coeffs) => {
                let r2 = reach + int(1);
                let m = coeffs.iter().enumerate().map(|(n, c)| c.abs() * num_traits::pow(r2.clone(), n)).max().unwrap_or_else(Rational::zero);
                Ok(Some((core::cmp::max(m, Rational::one()), r2)))
            }
            Majorant::Binomial(alpha) => {
                if rational::is_integer(alpha) && !alpha.is_negative() {
                    let d = u64::try_from(alpha.numer().clone()).unwrap_or(0);
                    let coeffs = (0..=d).map(|k| rational::binomial_rational(alpha, k)).collect();
                    return Majorant::Finite(coeffs).dominate(reach);
                }
                if reach >= &Rational::one() {
                    return Ok(None);
                }
                let r2 = (reach + int(1)) / int(2);
                // |C(α,n+1)/C(α,n)| ≤ 1 + (|α|−1)/(n+1); beyond n₀ the weighted terms shrink
                let a = alpha.abs();
                let slack = core::cmp::max(&a - int(1), Rational::zero());
                let n0 = rational::ceil(&(slack * &r2 / (Rational::one() - &r2))) + 1;
                let n0 = u64::try_from(n0).map_err(|_| Error::InvalidParameter("binomial exponent too large".into()))?;
                let mut c = Rational::one();
                let mut power = Rational::one();
                let mut m = Rational::one();
                for n in 1..=n0 + 1 {
                    c = c * (alpha - int(n as i64 - 1)) / int(n as i64);
                    power = &power * &r2;
                    m = core::cmp::max(m, c.abs() * &power);
                }
                Ok(Some((m, r2)))
            }
            Majorant::Derive(inner) => {
                let Some((m, r2)) = inner.dominate(reach)? else {
                    return Ok(None);
                };
                // |c'ₙ| R₃ⁿ ≤ (M/R₂)(n+1)(R₃/R₂)ⁿ with R₃ between reach and R₂
                let r3 = (reach + &r2) / int(2);
                let rho = &r3 / &r2;
                Ok(Some((m / &r2 * linear_weight_max(&rho), r3)))
            }
            Majorant::Integrate(inner, c0) => {
                let Some((m, r2)) = inner.dominate(reach)? else {
                    return Ok(None);
                };
                // |cₙ₋₁/n| R₂ⁿ ≤ M R₂ for n ≥ 1
                Ok(Some((core::cmp::max(&m * &r2, c0.abs()), r2)))
            }
            Majorant::Product(a, b) => {
                let (Some((ma, ra)), Some((mb, rb))) = (a.dominate(reach)?, b.dominate(reach)?) else {
                    return Ok(None);
                };
                // |cₙ| ≤ (n+1) Ma Mb / Rⁿ with R = min(Ra, Rb)
                let r = core::cmp::min(ra, rb);
                let r3 = (reach + &r) / int(2);
                let rho = &r3 / &r;
                Ok(Some((ma * mb * linear_weight_max(&rho), r3)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn weight_maximum() {
        assert_eq!(linear_weight_max(&rat(3, 4)), rat(27, 16));
        assert_eq!(linear_weight_max(&Rational::zero()), Rational::one());
    }

    #[test]
    fn fixed_requires_margin() {
        let g = Majorant::Fixed { m: int(1), r2: int(1) };
        assert!(g.dominate(&int(1)).unwrap().is_none());
        assert!(g.dominate(&rat(1, 2)).unwrap().is_some());
    }

    #[test]
    fn entire_bound_holds() {
        let (m, r2) = Majorant::Entire.dominate(&rat(3, 2)).unwrap().unwrap();
        for n in 0..30u64 {
            let c = Rational::new(1.into(), rational::factorial(n));
            assert!(c * num_traits::pow(r2.clone(), n as usize) <= m);
        }
    }

    #[test]
    fn binomial_bound_holds() {
        let alpha = rat(7, 2);
        let (m, r2) = Majorant::Binomial(alpha.clone()).dominate(&rat(1, 2)).unwrap().unwrap();
        for n in 0..80u64 {
            let c = rational::binomial_rational(&alpha, n).abs();
            assert!(c * num_traits::pow(r2.clone(), n as usize) <= m);
        }
    }
}
