//! Partial sums, convergence tests, rearrangements and infinite products.

mod battery;
pub mod product;
pub mod rearrange;

pub use battery::{classify, ratio_root_scan, RatioRootWindows, Relation, Test};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::accumulator::SumAccumulator;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::sequences::{Term, TermStream, TERM_BITS};

/// Structural families whose convergence facts are known in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesFamily {
    /// `Σ_{n≥1} a rⁿ⁻¹`.
    Geometric {
        a: Rational,
        r: Rational,
    },
    /// `Σ_{n≥1} 1/nᵖ`.
    PSeries {
        p: Rational,
    },
    /// `Σ_{n≥1} (−1)ⁿ⁻¹/nᵖ` for `p > 0`; `p = 1` is the alternating harmonic series.
    AltPSeries {
        p: Rational,
    },
    /// `Σ_{n≥1} (−1)ⁿ⁻¹/(2n−1)`.
    NewtonGregory,
    /// `Σ_{n≥0} n! xⁿ`.
    FactorialPower {
        x: Rational,
    },
    /// `Σ_{n≥0} xⁿ/n!`.
    ExpSeries {
        x: Rational,
    },
    /// `Σ_{n≥1} bⁿ/(cⁿ − 1)` with `c > 1`.
    PowerRatio {
        b: Rational,
        c: Rational,
    },
    Custom,
}

impl SeriesFamily {
    pub fn alt_harmonic() -> Self {
        SeriesFamily::AltPSeries { p: int(1) }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesFamily::Geometric { a, r } => write!(f, "geometric(a={a}, r={r})"),
            SeriesFamily::PSeries { p } => write!(f, "p-series(p={p})"),
            SeriesFamily::AltPSeries { p } if p.is_one() => write!(f, "alternating harmonic"),
            SeriesFamily::AltPSeries { p } => write!(f, "alternating p-series(p={p})"),
            SeriesFamily::NewtonGregory => write!(f, "Newton-Gregory"),
            SeriesFamily::FactorialPower { x } => write!(f, "sum n! x^n (x={x})"),
            SeriesFamily::ExpSeries { x } => write!(f, "sum x^n/n! (x={x})"),
            SeriesFamily::PowerRatio { b, c } => write!(f, "sum {b}^n/({c}^n-1)"),
            SeriesFamily::Custom => write!(f, "custom"),
        }
    }
}

/// `1/nᵖ` as an exact term for integer `p`, otherwise an enclosure.
fn inv_power(n: u64, p: &Rational) -> Result<Term> {
    let x = int(n as i64);
    if rational::is_integer(p) {
        let e = i64::try_from(p.numer().clone()).map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
        return Ok(Term::Exact(rational::powi(&x, -e)?));
    }
    let (lo, hi) = rational::rational_pow_bracket(&x, &-p, TERM_BITS)?;
    Ok(Term::Approx(Enclosure::new(lo, hi)?))
}

fn family_stream(family: &SeriesFamily) -> Result<TermStream> {
    Ok(match family.clone() {
        SeriesFamily::Geometric { a, r } => TermStream::exact(format!("{family}"), 1, move |n| &a * num_traits::pow(r.clone(), (n - 1) as usize)),
        SeriesFamily::PSeries { p } => TermStream::indexed(format!("{family}"), 1, move |n| inv_power(n, &p)),
        SeriesFamily::AltPSeries { p } => {
            if !p.is_positive() {
                return Err(Error::InvalidParameter("alternating p-series needs p > 0".into()));
            }
            TermStream::indexed(format!("{family}"), 1, move |n| {
                let t = inv_power(n, &p)?;
                Ok(if n % 2 == 1 {
                    t
                } else {
                    match t {
                        Term::Exact(r) => Term::Exact(-r),
                        other => Term::Approx(-other.enclosure(TERM_BITS)),
                    }
                })
            })
        }
        SeriesFamily::NewtonGregory => TermStream::exact(format!("{family}"), 1, |n| rational::rat(if n % 2 == 1 { 1 } else { -1 }, 2 * n as i64 - 1)),
        SeriesFamily::FactorialPower { x } => {
            TermStream::exact(format!("{family}"), 0, move |n| Rational::from_integer(rational::factorial(n)) * num_traits::pow(x.clone(), n as usize))
        }
        SeriesFamily::ExpSeries { x } => {
            TermStream::exact(format!("{family}"), 0, move |n| num_traits::pow(x.clone(), n as usize) / Rational::from_integer(rational::factorial(n)))
        }
        SeriesFamily::PowerRatio { b, c } => {
            if c <= Rational::one() {
                return Err(Error::InvalidParameter("power ratio needs c > 1".into()));
            }
            TermStream::exact(format!("{family}"), 1, move |n| {
                let k = n as usize;
                num_traits::pow(b.clone(), k) / (num_traits::pow(c.clone(), k) - int(1))
            })
        }
        SeriesFamily::Custom => return Err(Error::InvalidParameter("custom series need explicit terms".into())),
    })
}

/// A series `Σ aₙ` over a term stream, tagged with its family when known.
#[derive(Clone, Debug)]
pub struct SeriesHandle {
    terms: TermStream,
    family: SeriesFamily,
}

impl SeriesHandle {
    pub fn named(family: SeriesFamily) -> Result<Self> {
        Ok(SeriesHandle { terms: family_stream(&family)?, family })
    }

    pub fn custom(terms: TermStream) -> Self {
        SeriesHandle { terms, family: SeriesFamily::Custom }
    }

    pub fn terms(&self) -> &TermStream {
        &self.terms
    }

    pub fn family(&self) -> &SeriesFamily {
        &self.family
    }

    pub fn start(&self) -> u64 {
        self.terms.start()
    }

    pub fn label(&self) -> &str {
        self.terms.label()
    }

    pub fn term_enclosure(&self, n: u64) -> Result<Enclosure> {
        Ok(self.terms.term(n)?.enclosure(TERM_BITS))
    }

    /// Exact `sₙ = a_start + … + aₙ`.
    pub fn partial_sum(&self, n: u64) -> Result<Rational> {
        if n < self.start() {
            return Err(Error::IndexBeforeStart { index: n, start: self.start() });
        }
        let mut acc = SumAccumulator::new();
        for t in self.terms.exact_terms(self.start(), n)? {
            acc.add(&t);
        }
        Ok(acc.to_rational())
    }

    /// Exact prefix sums `s_start, …, sₙ`.
    pub fn prefix_sums(&self, n: u64) -> Result<Vec<Rational>> {
        let mut acc = SumAccumulator::new();
        let mut out = Vec::new();
        for t in self.terms.exact_terms(self.start(), n)? {
            acc.add(&t);
            out.push(acc.to_rational());
        }
        Ok(out)
    }

    /// Enclosure of `sₙ`; exact when every term is.
    pub fn partial_sum_enclosure(&self, n: u64) -> Result<Enclosure> {
        if n < self.start() {
            return Err(Error::IndexBeforeStart { index: n, start: self.start() });
        }
        let mut acc = SumAccumulator::new();
        let mut loose: Vec<Enclosure> = Vec::new();
        for t in self.terms.terms(self.start(), n)? {
            match t.as_exact() {
                Some(r) => acc.add(&r),
                None => loose.push(t.enclosure(TERM_BITS)),
            }
        }
        let exact = Enclosure::point(acc.to_rational());
        if loose.is_empty() {
            return Ok(exact);
        }
        Ok(&exact + &Enclosure::sum_rounded(loose.iter(), TERM_BITS))
    }

    /// `Σ |aₙ|`, keeping the family when the absolute series is itself named.
    pub fn abs(&self) -> SeriesHandle {
        let family = match &self.family {
            SeriesFamily::Geometric { a, r } => SeriesFamily::Geometric { a: a.abs(), r: r.abs() },
            SeriesFamily::PSeries { p } | SeriesFamily::AltPSeries { p } => SeriesFamily::PSeries { p: p.clone() },
            SeriesFamily::FactorialPower { x } => SeriesFamily::FactorialPower { x: x.abs() },
            SeriesFamily::ExpSeries { x } => SeriesFamily::ExpSeries { x: x.abs() },
            SeriesFamily::PowerRatio { b, c } => SeriesFamily::PowerRatio { b: b.abs(), c: c.clone() },
            _ => SeriesFamily::Custom,
        };
        if family != SeriesFamily::Custom {
            if let Ok(h) = SeriesHandle::named(family) {
                return h;
            }
        }
        let base = self.terms.clone();
        let stream = TermStream::indexed(format!("|{}|", self.label()), self.start(), move |n| {
            Ok(match base.term(n)? {
                Term::Exact(r) => Term::Exact(r.abs()),
                other => Term::Approx(other.enclosure(TERM_BITS).abs()),
            })
        });
        SeriesHandle::custom(stream)
    }
}

/// `Σ (−1)ᵏ b_{start+k}` over the first `n` terms, enclosed between two
/// consecutive partial sums.
///
/// The prefix `b_start … b_{start+n}` must be nonnegative and nonincreasing;
/// the first violation is reported by index.
pub fn alternating_sum_with_bound(b: &TermStream, n: u64) -> Result<Enclosure> {
    let start = b.start();
    let terms = b.exact_terms(start, start + n)?;
    for (i, t) in terms.iter().enumerate() {
        if t.is_negative() {
            return Err(Error::ClaimViolated { index: start + i as u64, what: String::from("b_n >= 0") });
        }
        if i > 0 && t > &terms[i - 1] {
            return Err(Error::ClaimViolated { index: start + i as u64, what: String::from("b_n nonincreasing") });
        }
    }
    let mut acc = SumAccumulator::new();
    for (i, t) in terms[..n as usize].iter().enumerate() {
        if i % 2 == 0 {
            acc.add(t);
        } else {
            acc.sub(t);
        }
    }
    let s_n = acc.to_rational();
    let next = &terms[n as usize];
    let s_next = if n % 2 == 0 { &s_n + next } else { &s_n - next };
    Ok(Enclosure::spanning(s_n, s_next))
}
