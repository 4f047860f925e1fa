//! Bernstein polynomials `Bₙ(f)(x) = Σ f(k/n) C(n,k) xᵏ(1−x)ⁿ⁻ᵏ`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::poly::Poly;
use crate::rational::{self, int, Rational};

/// `p_{n,k}(x) = C(n,k) xᵏ(1−x)ⁿ⁻ᵏ`.
pub fn basis(n: u32, k: u32, x: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let c = Rational::from_integer(rational::binomial(u64::from(n), u64::from(k)));
    c * num_traits::pow(x.clone(), k as usize) * num_traits::pow(Rational::one() - x, (n - k) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinOperator {
    n: u32,
    samples: Vec<Rational>,
    a: Rational,
    b: Rational,
}

impl BernsteinOperator {
    /// Samples `fₖ` at `u(k/n)` with `u(t) = a + t(b − a)`.
    pub fn from_samples(samples: Vec<Rational>, a: Rational, b: Rational) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("need n + 1 samples".into()));
        }
        if a >= b {
            return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
        }
        let n = u32::try_from(samples.len() - 1).map_err(|_| Error::InvalidParameter("degree too large".into()))?;
        Ok(BernsteinOperator { n, samples, a, b })
    }

    /// Exact samples of `f` on `[0, 1]`.
    pub fn new(f: &FnDescriptor, n: u32) -> Result<Self> {
        Self::on_interval(f, n, int(0), int(1))
    }

    pub fn on_interval(f: &FnDescriptor, n: u32, a: Rational, b: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        let h = (&b - &a) / int(i64::from(n));
        let samples = (0..=n).map(|k| f.eval_exact(&(&a + &h * int(i64::from(k))))).collect::<Result<Vec<_>>>()?;
        Self::from_samples(samples, a, b)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }

    fn pullback(&self, x: &Rational) -> Result<Rational> {
        if x < &self.a || x > &self.b {
            return Err(Error::OutsideDomain(format!("{x} is outside [{}, {}]", self.a, self.b)));
        }
        Ok((x - &self.a) / (&self.b - &self.a))
    }

    /// `Bₙ(f)(x)`, exactly.
    pub fn apply(&self, x: &Rational) -> Result<Rational> {
        let t = self.pullback(x)?;
        Ok(self.samples.iter().enumerate().map(|(k, s)| s * basis(self.n, k as u32, &t)).sum())
    }

    /// `Bₙ(f)` as a polynomial in `t = (x − a)/(b − a)`.
    pub fn polynomial(&self) -> Poly {
        let t = Poly::identity();
        let one_minus = Poly::from_ints(&[1, -1]);
        let mut out = Poly::zero();
        for (k, s) in self.samples.iter().enumerate() {
            let c = s * Rational::from_integer(rational::binomial(u64::from(self.n), k as u64));
            out = out.add(&t.pow(k as u32).mul(&one_minus.pow(self.n - k as u32)).scale(&c));
        }
        out
    }

    /// `max |Bₙ(f)(x) − f(x)|` over `G + 1` evenly spaced points, with the maximizer.
    pub fn grid_deviation(&self, f: &FnDescriptor, g: u64) -> Result<(Rational, Rational)> {
        if g == 0 {
            return Err(Error::InvalidParameter("grid needs at least one cell".into()));
        }
        let h = (&self.b - &self.a) / int(g as i64);
        let mut best = (Rational::zero(), self.a.clone());
        for j in 0..=g {
            let x = &self.a + &h * int(j as i64);
            let d = (self.apply(&x)? - f.eval_exact(&x)?).abs();
            if d > best.0 {
                best = (d, x);
            }
        }
        Ok(best)
    }
}

/// The constructive bound `ε/2 + M/(2δ²n)`.
pub fn bernstein_error_bound(m: &Rational, delta: &Rational, eps: &Rational, n: u32) -> Result<Rational> {
    if delta <= &Rational::zero() || n == 0 {
        return Err(Error::InvalidParameter("need delta > 0 and n >= 1".into()));
    }
    Ok(eps / int(2) + m / (int(2) * delta * delta * int(i64::from(n))))
}
