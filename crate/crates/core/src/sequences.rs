//! Term streams, finite-horizon limit detection and tail windows.

use core::cmp::Ordering;
use core::fmt;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::{Direction, FnDescriptor};
use crate::powerseries::elementary;
use crate::rational::{self, int, rat, Rational};
use crate::verdict::{Assurance, Certificate, TestKind, Verdict};

/// Working precision for comparing non-rational terms.
pub const TERM_BITS: u32 = 128;

/// `sin(2π·num/den)` with `0 ≤ num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Turn {
    num: i64,
    den: i64,
}

impl Turn {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameter(format!("turn denominator must be positive, got {den}")));
        }
        Ok(Turn { num: num.rem_euclid(den), den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// `φ ∈ [−1/4, 1/4]` with `sin(2πt) = sin(2πφ)`; sine is increasing in φ.
    pub fn phase(&self) -> Rational {
        let t = rat(self.num, self.den);
        if t <= rat(1, 4) {
            t
        } else if t <= rat(3, 4) {
            rat(1, 2) - t
        } else {
            t - int(1)
        }
    }

    /// The value when it is rational (φ ∈ {0, ±1/12, ±1/4}).
    pub fn exact_value(&self) -> Option<Rational> {
        let phi = self.phase();
        let sign = if phi.is_negative() { -1 } else { 1 };
        let a = phi.abs();
        if a.is_zero() {
            Some(Rational::zero())
        } else if a == rat(1, 12) {
            Some(rat(sign, 2))
        } else if a == rat(1, 4) {
            Some(int(sign))
        } else {
            None
        }
    }

    pub fn enclosure(&self, bits: u32) -> Enclosure {
        if let Some(v) = self.exact_value() {
            return Enclosure::point(v);
        }
        let pi = elementary::pi(bits + 8);
        let angle = pi.scale(&(self.phase() * int(2)));
        // sin is increasing on [−π/2, π/2]
        let lo = elementary::sin(angle.lo(), bits).map(|e| e.lo().clone());
        let hi = elementary::sin(angle.hi(), bits).map(|e| e.hi().clone());
        match (lo, hi) {
            (Ok(lo), Ok(hi)) => Enclosure::spanning(lo, hi),
            _ => Enclosure::new(int(-1), int(1)).unwrap_or_else(|_| Enclosure::zero()),
        }
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sin(2pi*{}/{})", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Exact(Rational),
    Sine(Turn),
    Approx(Enclosure),
}

impl Term {
    pub fn as_exact(&self) -> Option<Rational> {
        match self {
            Term::Exact(r) => Some(r.clone()),
            Term::Sine(t) => t.exact_value(),
            Term::Approx(e) => e.as_point().cloned(),
        }
    }

    pub fn enclosure(&self, bits: u32) -> Enclosure {
        match self {
            Term::Exact(r) => Enclosure::point(r.clone()),
            Term::Sine(t) => t.enclosure(bits),
            Term::Approx(e) => e.clone(),
        }
    }

    /// Exact when decidable; `None` when two enclosures overlap.
    pub fn compare(&self, other: &Term) -> Option<Ordering> {
        if let (Term::Sine(a), Term::Sine(b)) = (self, other) {
            return Some(a.phase().cmp(&b.phase()));
        }
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return Some(a.cmp(&b));
        }
        // a rational never equals an irrational sine value, so refinement terminates
        let mut bits = 64;
        while bits <= 4 * TERM_BITS {
            let c = self.enclosure(bits).compare(&other.enclosure(bits));
            if c.is_some() {
                return c;
            }
            if matches!(self, Term::Approx(_)) && matches!(other, Term::Approx(_)) {
                return None;
            }
            bits *= 2;
        }
        None
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Exact(r) => f.write_str(&rational::exact_string(r)),
            Term::Sine(t) => write!(f, "{t}"),
            Term::Approx(e) => write!(f, "{e}"),
        }
    }
}

impl From<Rational> for Term {
    fn from(r: Rational) -> Self {
        Term::Exact(r)
    }
}

type IndexedFn = Arc<dyn Fn(u64) -> Result<Term> + Send + Sync>;
type StepFn = Arc<dyn Fn(u64, &Term) -> Result<Term> + Send + Sync>;

#[derive(Clone)]
enum Gen {
    Indexed(IndexedFn),
    /// `a_start = first`, `aₙ = step(n, aₙ₋₁)`.
    Recurrence {
        first: Term,
        step: StepFn,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Harmonic,
    Geometric,
    RecursiveSqrt2,
    EulerPow,
    AltHarmonic,
    SinRational,
    Constant,
    AltSign,
}

/// A deterministic map `n ↦ aₙ` for `n ≥ start`.
#[derive(Clone)]
pub struct TermStream {
    label: String,
    start: u64,
    gen: Gen,
}

impl fmt::Debug for TermStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TermStream").field("label", &self.label).field("start", &self.start).finish()
    }
}

impl TermStream {
    pub fn indexed<F>(label: impl Into<String>, start: u64, f: F) -> Self
    where
        F: Fn(u64) -> Result<Term> + Send + Sync + 'static,
    {
        TermStream { label: label.into(), start, gen: Gen::Indexed(Arc::new(f)) }
    }

    /// Rational-valued stream.
    pub fn exact<F>(label: impl Into<String>, start: u64, f: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self::indexed(label, start, move |n| Ok(Term::Exact(f(n))))
    }

    pub fn recurrence<F>(label: impl Into<String>, start: u64, first: Term, step: F) -> Self
    where
        F: Fn(u64, &Term) -> Result<Term> + Send + Sync + 'static,
    {
        TermStream { label: label.into(), start, gen: Gen::Recurrence { first, step: Arc::new(step) } }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn term(&self, n: u64) -> Result<Term> {
        if n < self.start {
            return Err(Error::IndexBeforeStart { index: n, start: self.start });
        }
        match &self.gen {
            Gen::Indexed(f) => f(n),
            Gen::Recurrence { .. } => Ok(self.terms(n, n)?.pop().unwrap_or(Term::Exact(Rational::zero()))),
        }
    }

    /// `a_from … a_to` inclusive.
    pub fn terms(&self, from: u64, to: u64) -> Result<Vec<Term>> {
        if from < self.start {
            return Err(Error::IndexBeforeStart { index: from, start: self.start });
        }
        if to < from {
            return Ok(Vec::new());
        }
        match &self.gen {
            Gen::Indexed(f) => (from..=to).map(|n| f(n)).collect(),
            Gen::Recurrence { first, step } => {
                let mut out = Vec::with_capacity((to - from + 1) as usize);
                let mut cur = first.clone();
                for n in self.start..=to {
                    if n > self.start {
                        cur = step(n, &cur)?;
                    }
                    if n >= from {
                        out.push(cur.clone());
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn exact_term(&self, n: u64) -> Result<Rational> {
        self.term(n)?.as_exact().ok_or_else(|| Error::NotExact { at: format!("{}[{n}]", self.label) })
    }

    pub fn exact_terms(&self, from: u64, to: u64) -> Result<Vec<Rational>> {
        self.terms(from, to)?
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.as_exact().ok_or_else(|| Error::NotExact { at: format!("{}[{}]", self.label, from + i as u64) }))
            .collect()
    }

    /// `sₙ = a_start + … + aₙ` as a stream; requires exact terms.
    pub fn partial_sums(&self) -> TermStream {
        let base = self.clone();
        let start = self.start;
        TermStream::indexed(format!("partial sums of {}", self.label), start, move |n| {
            let mut acc = crate::accumulator::SumAccumulator::new();
            for t in base.exact_terms(start, n)? {
                acc.add(&t);
            }
            Ok(Term::Exact(acc.to_rational()))
        })
    }

    /// `n ↦ f(aₙ)` for exact maps.
    pub fn map_exact<F>(&self, label: impl Into<String>, f: F) -> TermStream
    where
        F: Fn(u64, &Rational) -> Result<Rational> + Send + Sync + 'static,
    {
        let base = self.clone();
        TermStream::indexed(label, self.start, move |n| {
            let a = base.exact_term(n)?;
            Ok(Term::Exact(f(n, &a)?))
        })
    }
}

/// Named families of the text; parameters are validated here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedParams {
    None,
    Ratio(Rational),
    Period(i64),
    Value(Rational),
}

pub fn make_named(family: Family, params: NamedParams) -> Result<TermStream> {
    let bad = |what: &str| Error::InvalidParameter(format!("{family:?} expects {what}"));
    Ok(match (family, params) {
        (Family::Harmonic, NamedParams::None) => TermStream::exact("harmonic", 1, |n| rat(1, n as i64)),
        (Family::Geometric, NamedParams::Ratio(r)) => TermStream::exact(format!("geometric({r})"), 1, move |n| num_traits::pow(r.clone(), n as usize)),
        (Family::RecursiveSqrt2, NamedParams::None) => TermStream::recurrence("recursive_sqrt2", 1, Term::Exact(int(1)), |_, prev| {
            let a = prev.as_exact().ok_or_else(|| Error::NotExact { at: "recursive_sqrt2".into() })?;
            Ok(Term::Exact((&a * int(2) + int(2)) / (&a + int(2))))
        }),
        (Family::EulerPow, NamedParams::None) => TermStream::exact("euler_pow", 1, |n| num_traits::pow(Rational::one() + rat(1, n as i64), n as usize)),
        (Family::AltHarmonic, NamedParams::None) => TermStream::exact("alt_harmonic", 1, |n| rat(if n % 2 == 1 { 1 } else { -1 }, n as i64)),
        (Family::SinRational, NamedParams::Period(q)) => {
            if q <= 0 {
                return Err(bad("a positive period"));
            }
            TermStream::indexed(format!("sin(2pi n/{q})"), 1, move |n| Ok(Term::Sine(Turn::new((n % q as u64) as i64, q)?)))
        }
        (Family::Constant, NamedParams::Value(c)) => TermStream::exact(format!("constant({c})"), 1, move |_| c.clone()),
        (Family::AltSign, NamedParams::None) => TermStream::exact("alt_sign", 1, |n| int(if n % 2 == 0 { 1 } else { -1 })),
        (Family::Geometric, _) => return Err(bad("a ratio")),
        (Family::SinRational, _) => return Err(bad("a period")),
        (Family::Constant, _) => return Err(bad("a value")),
        _ => return Err(bad("no parameters")),
    })
}

/// Finite-window surrogate for the tail infimum and supremum.
///
/// `inf` over-approximates `inf_{k≥n} aₖ` and `sup` under-approximates
/// `sup_{k≥n} aₖ`: both are attained inside `[n, n + w]` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowStats {
    pub n: u64,
    pub w: u64,
    pub inf: Term,
    pub inf_index: u64,
    pub sup: Term,
    pub sup_index: u64,
}

pub fn limsup_liminf_window(s: &TermStream, n: u64, w: u64) -> Result<WindowStats> {
    if w < 1 {
        return Err(Error::InvalidParameter("window length must be at least 1".into()));
    }
    let terms = s.terms(n, n + w)?;
    let (mut lo, mut hi) = (0usize, 0usize);
    for i in 1..terms.len() {
        match terms[i].compare(&terms[lo]) {
            Some(Ordering::Less) => lo = i,
            Some(_) => {}
            None => return Err(Error::Incomparable(n + i as u64, n + lo as u64)),
        }
        match terms[i].compare(&terms[hi]) {
            Some(Ordering::Greater) => hi = i,
            Some(_) => {}
            None => return Err(Error::Incomparable(n + i as u64, n + hi as u64)),
        }
    }
    Ok(WindowStats { n, w, inf: terms[lo].clone(), inf_index: n + lo as u64, sup: terms[hi].clone(), sup_index: n + hi as u64 })
}

#[derive(Clone, Debug)]
pub enum LimitMode {
    /// Caller asserts monotonicity in `direction` and the bound; the prefix
    /// is checked exactly. An optional companion stream bounds the limit
    /// from the other side (e.g. `2/aₙ` for the √2 recursion).
    MonotoneCertified {
        direction: Direction,
        bound: Rational,
        companion: Option<TermStream>,
    },
    CauchyWindow,
}

pub fn detect_limit(s: &TermStream, mode: &LimitMode, horizon: u64, eps: &Rational) -> Result<Verdict> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let last = s.start() + horizon - 1;
    match mode {
        LimitMode::MonotoneCertified { direction, bound, companion } => {
            let terms = s.exact_terms(s.start(), last)?;
            for (i, w) in terms.windows(2).enumerate() {
                let ok = match direction {
                    Direction::Increasing => w[0] <= w[1],
                    Direction::Decreasing => w[0] >= w[1],
                };
                if !ok {
                    return Err(Error::ClaimViolated { index: s.start() + i as u64 + 1, what: format!("{direction:?} monotonicity").to_lowercase() });
                }
            }
            for (i, t) in terms.iter().enumerate() {
                let ok = match direction {
                    Direction::Increasing => t <= bound,
                    Direction::Decreasing => t >= bound,
                };
                if !ok {
                    return Err(Error::ClaimViolated { index: s.start() + i as u64, what: format!("bound {bound}") });
                }
            }
            let a_n = terms.last().cloned().unwrap_or_default();
            let mut other = bound.clone();
            if let Some(c) = companion {
                for t in c.exact_terms(c.start(), c.start() + horizon - 1)? {
                    other = match direction {
                        Direction::Increasing => core::cmp::min(other, t),
                        Direction::Decreasing => core::cmp::max(other, t),
                    };
                }
            }
            let value = Enclosure::spanning(a_n.clone(), other);
            let cert = Certificate::new(TestKind::MonotoneBounded, Assurance::CallerAsserted)
                .text("direction", format!("{direction:?}").to_lowercase())
                .rational("bound", bound.clone())
                .index("horizon", horizon)
                .rational("last_term", a_n)
                .rational("width", value.width());
            Ok(Verdict::converges(cert, Some(value)))
        }
        LimitMode::CauchyWindow => {
            let from = s.start() + (horizon - 1) / 2;
            let terms = s.terms(from, last)?;
            let encl: Vec<Enclosure> = terms.iter().map(|t| t.enclosure(TERM_BITS)).collect();
            let hull = Enclosure::hull_all(encl.iter()).unwrap_or_else(Enclosure::zero);
            let lo = encl.iter().map(|e| e.hi().clone()).min().unwrap_or_default();
            let hi = encl.iter().map(|e| e.lo().clone()).max().unwrap_or_default();
            // certain spread ≤ oscillation ≤ hull width
            let spread = core::cmp::max(&hi - &lo, Rational::zero());
            let cert = Certificate::new(TestKind::CauchyWindow, Assurance::Empirical)
                .index("window_from", from)
                .index("window_to", last)
                .rational("oscillation", spread.clone())
                .rational("eps", eps.clone());
            if hull.width() <= *eps {
                Ok(Verdict::converges(cert.rational("oscillation", hull.width()), None))
            } else {
                Ok(Verdict::inconclusive(Some(cert)))
            }
        }
    }
}

/// `(f(x₀+h) + f(x₀−h) − 2f(x₀)) / h²` with exact evaluation.
pub fn second_symmetric_quotient(f: &FnDescriptor, x0: &Rational, h: &Rational) -> Result<Rational> {
    if h.is_zero() {
        return Err(Error::InvalidParameter("h must be nonzero".into()));
    }
    let plus = f.eval_exact(&(x0 + h))?;
    let minus = f.eval_exact(&(x0 - h))?;
    let mid = f.eval_exact(x0)?;
    Ok((plus + minus - mid * int(2)) / (h * h))
}

/// `2/aₙ`, the companion that bounds the √2 recursion from above.
pub fn sqrt2_companion() -> TermStream {
    let base = make_named(Family::RecursiveSqrt2, NamedParams::None).expect("valid family");
    base.map_exact("2/a_n", |_, a| Ok(int(2) / a)).with_label("2/a_n".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::verdict::{Status, Witness};

    #[test]
    fn named_examples() {
        let s = make_named(Family::RecursiveSqrt2, NamedParams::None).unwrap();
        assert_eq!(s.exact_term(2).unwrap(), rat(4, 3));
        assert_eq!(make_named(Family::Harmonic, NamedParams::None).unwrap().exact_term(1).unwrap(), int(1));
        assert_eq!(make_named(Family::EulerPow, NamedParams::None).unwrap().exact_term(3).unwrap(), rat(64, 27));
        assert!(make_named(Family::SinRational, NamedParams::Period(0)).is_err());
        assert!(matches!(s.term(0), Err(Error::IndexBeforeStart { .. })));
    }

    #[test]
    fn window_examples() {
        let alt = make_named(Family::AltSign, NamedParams::None).unwrap();
        let w = limsup_liminf_window(&alt, 3, 2).unwrap();
        assert_eq!((w.inf.as_exact(), w.sup.as_exact()), (Some(int(-1)), Some(int(1))));
        let c = make_named(Family::Constant, NamedParams::Value(rat(2, 7))).unwrap();
        let w = limsup_liminf_window(&c, 1, 4).unwrap();
        assert_eq!(w.inf, w.sup);
        let sin5 = make_named(Family::SinRational, NamedParams::Period(5)).unwrap();
        let w = limsup_liminf_window(&sin5, 1, 5).unwrap();
        assert_eq!(w.sup, Term::Sine(Turn::new(1, 5).unwrap()));
        assert_eq!(w.inf, Term::Sine(Turn::new(4, 5).unwrap()));
    }

    #[test]
    fn sine_order_matches_numeric_order() {
        for q in 1..=24i64 {
            let turns: Vec<(Turn, Enclosure)> = (0..q)
                .map(|a| {
                    let t = Turn::new(a, q).unwrap();
                    let e = t.enclosure(64);
                    (t, e)
                })
                .collect();
            for (ta, ea) in &turns {
                for (tb, eb) in &turns {
                    if let Some(num) = ea.compare(eb) {
                        assert_eq!(ta.phase().cmp(&tb.phase()), num, "{ta} vs {tb}");
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_limit_of_sqrt2_recursion() {
        let s = make_named(Family::RecursiveSqrt2, NamedParams::None).unwrap();
        let mode = LimitMode::MonotoneCertified { direction: Direction::Increasing, bound: int(2), companion: Some(sqrt2_companion()) };
        let v = detect_limit(&s, &mode, 40, &Rational::zero()).unwrap();
        assert_eq!(v.status(), Status::Converges);
        let e = v.value().unwrap();
        assert!(e.width() < rational::ten_pow_neg(9));
        let sq_lo = e.lo() * e.lo();
        let sq_hi = e.hi() * e.hi();
        assert!(sq_lo <= int(2) && int(2) <= sq_hi);
        let mut prev = detect_limit(&s, &mode, 5, &Rational::zero()).unwrap().value().cloned().unwrap();
        for h in 6..30 {
            let cur = detect_limit(&s, &mode, h, &Rational::zero()).unwrap().value().cloned().unwrap();
            assert!(cur.is_subset_of(&prev));
            prev = cur;
        }
    }

    #[test]
    fn cauchy_window_never_diverges() {
        let alt = make_named(Family::AltSign, NamedParams::None).unwrap();
        let v = detect_limit(&alt, &LimitMode::CauchyWindow, 50, &rat(1, 10)).unwrap();
        assert_eq!(v.status(), Status::Inconclusive);
        assert_eq!(v.certificate().unwrap().witness("oscillation"), Some(&Witness::Rational(int(2))));
        let h = make_named(Family::Harmonic, NamedParams::None).unwrap().partial_sums();
        let v = detect_limit(&h, &LimitMode::CauchyWindow, 64, &rat(1, 2)).unwrap();
        assert_eq!(v.status(), Status::Inconclusive);
        let g = make_named(Family::Geometric, NamedParams::Ratio(rat(1, 2))).unwrap();
        let v = detect_limit(&g, &LimitMode::CauchyWindow, 64, &rat(1, 1000)).unwrap();
        assert_eq!(v.status(), Status::Converges);
        assert!(detect_limit(&g, &LimitMode::CauchyWindow, 0, &rat(1, 2)).is_err());
    }

    #[test]
    fn symmetric_quotients() {
        let sq = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
        assert_eq!(second_symmetric_quotient(&sq, &rat(3, 7), &rat(1, 10)).unwrap(), int(2));
        let cube = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(second_symmetric_quotient(&cube, &int(1), &rat(1, 10)).unwrap(), int(6));
        let quart = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 0, 0, 1]));
        assert_eq!(second_symmetric_quotient(&quart, &int(0), &rat(1, 2)).unwrap(), rat(1, 2));
        assert!(second_symmetric_quotient(&sq, &int(0), &int(0)).is_err());
    }

    #[test]
    fn monotone_window_inf_is_left_end() {
        let s = make_named(Family::EulerPow, NamedParams::None).unwrap();
        for n in 1..10 {
            let w = limsup_liminf_window(&s, n, 5).unwrap();
            assert_eq!(w.inf_index, n);
        }
    }
}
