//! Uniform convergence, Bernstein approximation and a gallery of
//! pathological functions.

pub mod bernstein;
pub mod gallery;
pub mod sawtooth;

pub use bernstein::{bernstein_error_bound, BernsteinOperator};
pub use gallery::{gallery, GalleryName};
pub use sawtooth::{nowhere_diff_quotients, QuotientLevel, SawtoothSeries};

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::powerseries::elementary;
use crate::rational::{int, Rational};
use crate::series::{classify, SeriesHandle, Test};
use crate::verdict::{Certificate, Status, Verdict};

type Generator = Arc<dyn Fn(u64) -> Result<FnDescriptor> + Send + Sync>;
type Extremum = Arc<dyn Fn(u64) -> Result<Deviation> + Send + Sync>;

/// `n ↦ fₙ` on a shared domain, with its pointwise limit.
#[derive(Clone)]
pub struct FnSequence {
    name: String,
    /// Interval scanned in grid mode.
    window: (Rational, Rational),
    gen: Generator,
    limit: FnDescriptor,
    extremum: Option<Extremum>,
}

impl fmt::Debug for FnSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSequence").field("name", &self.name).field("window", &self.window).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeviationKind {
    /// `sup |fₙ − f|` from a registered extremum formula.
    Exact,
    /// Maximum over grid points only: a lower bound for the supremum.
    GridLowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub value: Enclosure,
    pub kind: DeviationKind,
    /// Whether the supremum is a maximum, when known.
    pub attained: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeviationMode {
    ExactExtrema,
    Grid(u64),
}

impl FnSequence {
    pub fn new<G>(name: impl Into<String>, window: (Rational, Rational), limit: FnDescriptor, gen: G) -> Result<Self>
    where
        G: Fn(u64) -> Result<FnDescriptor> + Send + Sync + 'static,
    {
        if window.0 >= window.1 {
            return Err(Error::InvalidParameter(format!("empty window [{}, {}]", window.0, window.1)));
        }
        Ok(FnSequence { name: name.into(), window, gen: Arc::new(gen), limit, extremum: None })
    }

    pub fn with_extremum<E>(mut self, e: E) -> Self
    where
        E: Fn(u64) -> Result<Deviation> + Send + Sync + 'static,
    {
        self.extremum = Some(Arc::new(e));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn term(&self, n: u64) -> Result<FnDescriptor> {
        (self.gen)(n)
    }

    /// `xⁿ` on `[0, 1)` with limit 0; `Mₙ = 1`, never attained.
    pub fn powers() -> Self {
        let seq = FnSequence::new("x^n on [0,1)", (int(0), int(1)), FnDescriptor::constant(int(0)), |n| {
            Ok(FnDescriptor::polynomial(crate::poly::Poly::monomial(int(1), n as usize)))
        });
        seq.unwrap_or_else(|_| unreachable!())
            .with_extremum(|_| Ok(Deviation { value: Enclosure::point(int(1)), kind: DeviationKind::Exact, attained: Some(false) }))
    }

    /// `x e^{−nx²}` on ℝ with limit 0; the maximum sits at `x = 1/√(2n)`.
    pub fn gaussian_bumps(bits: u32) -> Self {
        let seq = FnSequence::new("x exp(-n x^2)", (int(0), int(4)), FnDescriptor::constant(int(0)), move |n| {
            let nn = int(n as i64);
            Ok(FnDescriptor::new(format!("x exp(-{n} x^2)"), move |x| Ok(elementary::exp(&(-&nn * x * x), bits)?.scale(x))))
        });
        seq.unwrap_or_else(|_| unreachable!()).with_extremum(move |n| {
            if n == 0 {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            let nn = int(n as i64);
            // fₙ at the enclosure of its critical point; fₙ is increasing left of it
            // and decreasing right of it, so the endpoint values bound the maximum
            let x = elementary::sqrt(&(int(1) / (int(2) * &nn)), bits)?;
            let at = |t: &Rational| -> Result<Enclosure> { Ok(elementary::exp(&(-&nn * t * t), bits)?.scale(t)) };
            let (a, b) = (at(x.lo())?, at(x.hi())?);
            let lo = core::cmp::min(a.lo(), b.lo()).clone();
            let slack = (x.hi() - x.lo()) * (x.hi() - x.lo()) * &nn * int(4);
            let hi = core::cmp::max(a.hi(), b.hi()) + slack;
            Ok(Deviation { value: Enclosure::new(lo, hi)?, kind: DeviationKind::Exact, attained: Some(true) })
        })
    }

    /// `fₙ = f` for every `n`.
    pub fn constant(f: FnDescriptor, window: (Rational, Rational)) -> Result<Self> {
        let g = f.clone();
        Ok(FnSequence::new(format!("constant {}", f.name()), window, f, move |_| Ok(g.clone()))?
            .with_extremum(|_| Ok(Deviation { value: Enclosure::zero(), kind: DeviationKind::Exact, attained: Some(true) })))
    }
}

/// `Mₙ = sup |fₙ − f|`.
pub fn uniform_deviation(fs: &FnSequence, n: u64, mode: DeviationMode) -> Result<Deviation> {
    match mode {
        DeviationMode::ExactExtrema => match &fs.extremum {
            Some(e) => e(n),
            None => Err(Error::MissingMetadata(format!("{}: no registered extremum formula", fs.name))),
        },
        DeviationMode::Grid(g) => {
            if g == 0 {
                return Err(Error::InvalidParameter("grid needs at least one cell".into()));
            }
            let f = fs.term(n)?;
            let (a, b) = &fs.window;
            let step = (b - a) / int(g as i64);
            let mut best: Option<Enclosure> = None;
            for j in 0..=g {
                let x = a + &step * int(j as i64);
                let d = (&f.eval(&x)? - &fs.limit.eval(&x)?).abs();
                best = Some(match best {
                    Some(prev) if prev.lo() >= d.lo() => prev,
                    _ => d,
                });
            }
            let value = best.unwrap_or_else(Enclosure::zero);
            Ok(Deviation { value, kind: DeviationKind::GridLowerBound, attained: None })
        }
    }
}

/// Weierstrass M-test: a convergent majorant `Σ Mₙ` gives uniform convergence.
/// Divergence of the majorant says nothing, so it is reported as inconclusive.
pub fn weierstrass_m_test(bounds: &SeriesHandle, policy: &[Test], horizon: u64) -> Result<Verdict> {
    for (i, t) in bounds.terms().terms(bounds.start(), bounds.start() + horizon.min(64))?.iter().enumerate() {
        if t.enclosure(64).hi() < &int(0) {
            return Err(Error::ClaimViolated { index: bounds.start() + i as u64, what: String::from("M_n >= 0") });
        }
    }
    let v = classify(bounds, policy, horizon)?;
    let (status, cert, value) = v.into_parts();
    Ok(match status {
        Status::Converges => {
            let inner = cert.ok_or_else(|| Error::MissingMetadata(String::from("certificate")))?;
            let c = Certificate::new(crate::verdict::TestKind::WeierstrassM, inner.assurance)
                .text("majorant_test", inner.test.as_str())
                .text("conclusion", "uniform and absolute convergence");
            let c = Certificate { trace: inner.trace, ..c };
            let c = match value {
                Some(e) => c.enclosure("majorant_sum", e),
                None => c,
            };
            Verdict::converges(c, None)
        }
        _ => {
            let mut c = Certificate::new(crate::verdict::TestKind::WeierstrassM, crate::verdict::Assurance::Empirical).text("majorant", status.as_str());
            if let Some(inner) = cert {
                c.trace = inner.trace;
            }
            Verdict::inconclusive(Some(c))
        }
    })
}

/// Tabulates `Mₙ` for `n` in `from..=to`.
pub fn deviation_table(fs: &FnSequence, from: u64, to: u64, mode: DeviationMode) -> Result<Vec<(u64, Deviation)>> {
    (from..=to).map(|n| Ok((n, uniform_deviation(fs, n, mode)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{self, rat};
    use crate::sequences::{Term, TermStream};
    use crate::series::SeriesFamily;
    use crate::verdict::Status;

    #[test]
    fn powers_never_converge_uniformly() {
        let fs = FnSequence::powers();
        for n in 1..=50 {
            let d = uniform_deviation(&fs, n, DeviationMode::ExactExtrema).unwrap();
            assert_eq!(d.value, Enclosure::point(int(1)));
            assert_eq!(d.attained, Some(false));
        }
        let g = uniform_deviation(&fs, 10, DeviationMode::Grid(100)).unwrap();
        assert_eq!(g.kind, DeviationKind::GridLowerBound);
        assert!(g.value.hi() <= &int(1));
    }

    #[test]
    fn gaussian_bump_maxima() {
        let fs = FnSequence::gaussian_bumps(80);
        for n in [1u64, 2, 10, 50] {
            let d = uniform_deviation(&fs, n, DeviationMode::ExactExtrema).unwrap();
            let e_half = elementary::exp(&rat(-1, 2), 80).unwrap();
            let root = elementary::sqrt(&int(2 * n as i64), 80).unwrap();
            let expected = e_half.div(&root).unwrap();
            assert!(d.value.overlaps(&expected));
            assert!(d.value.width() < rational::ten_pow_neg(9));
            let grid = uniform_deviation(&fs, n, DeviationMode::Grid(64)).unwrap();
            assert!(grid.value.lo() <= d.value.hi());
        }
    }

    #[test]
    fn constant_sequence() {
        let fs = FnSequence::constant(FnDescriptor::constant(int(3)), (int(0), int(1))).unwrap();
        assert_eq!(uniform_deviation(&fs, 7, DeviationMode::ExactExtrema).unwrap().value, Enclosure::zero());
        assert_eq!(uniform_deviation(&fs, 7, DeviationMode::Grid(8)).unwrap().value, Enclosure::zero());
    }

    #[test]
    fn m_test() {
        let quarter = SeriesHandle::named(SeriesFamily::Geometric { a: int(1), r: rat(1, 4) }).unwrap();
        let v = weierstrass_m_test(&quarter, &[Test::Geometric], 50).unwrap();
        assert_eq!(v.status(), Status::Converges);
        let decay = TermStream::indexed("exp(-n/2)", 1, |n| Ok(Term::Approx(elementary::exp(&rat(-(n as i64), 2), 64)?)));
        let v = weierstrass_m_test(&SeriesHandle::custom(decay), &[Test::Ratio { delta: rat(1, 100) }], 40).unwrap();
        assert_eq!(v.status(), Status::Converges);
        let harmonic = SeriesHandle::named(SeriesFamily::PSeries { p: int(1) }).unwrap();
        let v = weierstrass_m_test(&harmonic, &[Test::PSeries], 50).unwrap();
        assert_eq!(v.status(), Status::Inconclusive);
        let negative = SeriesHandle::custom(TermStream::exact("-1/n^2", 1, |n| rat(-1, (n * n) as i64)));
        assert!(weierstrass_m_test(&negative, &[Test::Ratio { delta: rat(1, 100) }], 40).is_err());
    }
}
