use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{alternating_sum_with_bound, SeriesFamily, SeriesHandle};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::integration::improper::{improper_integral, ImproperSpec, Partner, Region};
use crate::rational::{self, int, Rational};
use crate::sequences::TermStream;
use crate::verdict::{Assurance, Certificate, Status, TestKind, TraceEntry, Verdict};

/// How the series relates to a comparison partner `Σ bₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `0 ≤ aₙ ≤ k·bₙ`.
    Below,
    /// `aₙ ≥ k·bₙ ≥ 0`.
    Above,
}

#[derive(Clone, Debug)]
pub enum Test {
    /// Divergence when the terms stay away from zero. `lower_bound` is a
    /// caller claim `|aₙ| ≥ L` for custom series.
    NthTerm {
        lower_bound: Option<Rational>,
    },
    Geometric,
    PSeries,
    Comparison {
        partner: Box<SeriesHandle>,
        partner_policy: Vec<Test>,
        relation: Relation,
        factor: Rational,
    },
    LimitComparison {
        partner: Box<SeriesHandle>,
        partner_policy: Vec<Test>,
    },
    /// `aₙ = f(n)` with `f` positive and decreasing; decided by the improper
    /// integral of `f` over `[start, ∞)` against `partner`.
    Integral {
        f: FnDescriptor,
        partner: Partner,
    },
    Alternating,
    Ratio {
        delta: Rational,
    },
    Root {
        delta: Rational,
    },
    /// Records the partial-sum oscillation over the window; never decisive.
    CauchyCriterion {
        eps: Rational,
    },
    AbsConvergence(Box<Test>),
}

impl Test {
    pub fn kind(&self) -> TestKind {
        match self {
            Test::NthTerm { .. } => TestKind::NthTerm,
            Test::Geometric => TestKind::Geometric,
            Test::PSeries => TestKind::PSeries,
            Test::Comparison { .. } => TestKind::Comparison,
            Test::LimitComparison { .. } => TestKind::LimitComparison,
            Test::Integral { .. } => TestKind::Integral,
            Test::Alternating => TestKind::Alternating,
            Test::Ratio { .. } => TestKind::Ratio,
            Test::Root { .. } => TestKind::Root,
            Test::CauchyCriterion { .. } => TestKind::CauchyCriterion,
            Test::AbsConvergence(_) => TestKind::AbsConvergence,
        }
    }

    /// The default manual: structural tests first, then the generic ones.
    pub fn default_policy() -> Vec<Test> {
        let delta = rational::rat(1, 100);
        alloc::vec![
            Test::Geometric,
            Test::PSeries,
            Test::NthTerm { lower_bound: None },
            Test::Alternating,
            Test::Ratio { delta: delta.clone() },
            Test::Root { delta },
        ]
    }
}

/// Outcome of one test: a verdict or an inconclusive note.
enum Outcome {
    Decided(Verdict),
    Open(String),
}

fn window(s: &SeriesHandle, horizon: u64) -> (u64, u64) {
    let from = core::cmp::max(s.start(), horizon / 2);
    (from, core::cmp::max(from, horizon))
}

/// Ordered policy; the first decisive test wins and the trace of every
/// test tried is kept in the certificate.
pub fn classify(s: &SeriesHandle, policy: &[Test], horizon: u64) -> Result<Verdict> {
    if policy.is_empty() {
        return Err(Error::EmptyPolicy);
    }
    let mut trace = Vec::new();
    for test in policy {
        match run(s, test, horizon)? {
            Outcome::Decided(v) => {
                trace.push(TraceEntry { test: test.kind(), outcome: v.status(), note: String::from("decisive") });
                return Ok(v.with_trace(trace, test.kind()));
            }
            Outcome::Open(note) => trace.push(TraceEntry { test: test.kind(), outcome: Status::Inconclusive, note }),
        }
    }
    let last = policy.last().map(Test::kind).unwrap_or(TestKind::NthTerm);
    Ok(Verdict::inconclusive(None).with_trace(trace, last))
}

fn open(note: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome::Open(note.into()))
}

fn run(s: &SeriesHandle, test: &Test, horizon: u64) -> Result<Outcome> {
    match test {
        Test::NthTerm { lower_bound } => nth_term(s, lower_bound.as_ref(), horizon),
        Test::Geometric => {
            let SeriesFamily::Geometric { a, r } = s.family() else {
                return open("not a geometric series");
            };
            let cert = Certificate::new(TestKind::Geometric, Assurance::Machine).rational("a", a.clone()).rational("r", r.clone());
            if a.is_zero() {
                return Ok(Outcome::Decided(Verdict::converges(cert, Some(Enclosure::zero()))));
            }
            if r.abs() < Rational::one() {
                let sum = a / (int(1) - r);
                Ok(Outcome::Decided(Verdict::converges(cert.rational("sum", sum.clone()), Some(Enclosure::point(sum)))))
            } else {
                Ok(Outcome::Decided(Verdict::diverges(cert)))
            }
        }
        Test::PSeries => {
            let SeriesFamily::PSeries { p } = s.family() else {
                return open("not a p-series");
            };
            let cert = Certificate::new(TestKind::PSeries, Assurance::Machine).rational("p", p.clone());
            if p <= &Rational::one() {
                return Ok(Outcome::Decided(Verdict::diverges(cert)));
            }
            let value = if rational::is_integer(p) { Some(p_series_value(s, p, horizon)?) } else { None };
            Ok(Outcome::Decided(Verdict::converges(cert, value)))
        }
        Test::Comparison { partner, partner_policy, relation, factor } => comparison(s, partner, partner_policy, *relation, factor, horizon),
        Test::LimitComparison { partner, partner_policy } => limit_comparison(s, partner, partner_policy, horizon),
        Test::Integral { f, partner } => integral(s, f, partner, horizon),
        Test::Alternating => alternating(s, horizon),
        Test::Ratio { delta } => ratio(s, delta, horizon),
        Test::Root { delta } => root(s, delta, horizon),
        Test::CauchyCriterion { eps } => {
            let (from, to) = window(s, horizon);
            let mut sums = Vec::new();
            let mut acc = s.partial_sum_enclosure(from)?;
            sums.push(acc.clone());
            for n in from + 1..=to {
                acc = &acc + &s.term_enclosure(n)?;
                sums.push(acc.clone().compact(128));
            }
            let hull = Enclosure::hull_all(sums.iter()).unwrap_or_else(Enclosure::zero);
            let w = hull.width();
            let note = format!("partial-sum oscillation on [{from}, {to}] is at most {} (eps {eps})", rational::decimal_ceil(&w, 12));
            open(note)
        }
        Test::AbsConvergence(inner) => {
            let abs = s.abs();
            match run(&abs, inner, horizon)? {
                Outcome::Decided(v) if v.status() == Status::Converges => {
                    let inner_cert = v.certificate().cloned();
                    let assurance = inner_cert.as_ref().map(|c| c.assurance).unwrap_or(Assurance::CallerAsserted);
                    let mut cert = Certificate::new(TestKind::AbsConvergence, assurance).text("inner", inner.kind().as_str());
                    if let Some(c) = inner_cert {
                        cert.witnesses.extend(c.witnesses);
                    }
                    Ok(Outcome::Decided(Verdict::converges(cert, None)))
                }
                Outcome::Decided(_) => open("absolute series diverges; says nothing about the original"),
                Outcome::Open(note) => open(format!("absolute series: {note}")),
            }
        }
    }
}

/// `sₙ + [1/((p−1)(n+1)^{p−1}), 1/((p−1)n^{p−1})]` from the integral bounds.
fn p_series_value(s: &SeriesHandle, p: &Rational, horizon: u64) -> Result<Enclosure> {
    let n = core::cmp::max(horizon, 1);
    let e = i64::try_from(p.numer().clone()).map_err(|_| Error::InvalidParameter("exponent too large".into()))? - 1;
    let pm1 = int(e);
    let lo = rational::powi(&int(n as i64 + 1), -e)? / &pm1;
    let hi = rational::powi(&int(n as i64), -e)? / &pm1;
    let sn = s.partial_sum(n)?;
    Enclosure::new(&sn + lo, sn + hi)
}

fn nth_term(s: &SeriesHandle, lower_bound: Option<&Rational>, horizon: u64) -> Result<Outcome> {
    let machine = |lb: Rational, from: u64| {
        let cert = Certificate::new(TestKind::NthTerm, Assurance::Machine).rational("lower_bound", lb).index("N", from);
        Ok(Outcome::Decided(Verdict::diverges(cert)))
    };
    match s.family() {
        SeriesFamily::Geometric { a, r } if !a.is_zero() && r.abs() >= Rational::one() => return machine(a.abs(), 1),
        SeriesFamily::PSeries { p } if !p.is_positive() => return machine(int(1), 1),
        SeriesFamily::FactorialPower { x } if !x.is_zero() => {
            // (n+1)|x| ≥ 1 from N = ⌈1/|x|⌉ on, so |aₙ| never drops below |a_N|
            let n = u64::try_from(rational::ceil(&x.abs().recip())).map_err(|_| Error::InvalidParameter("x too small".into()))?;
            let an = s.terms().exact_term(n)?.abs();
            return machine(an, n);
        }
        _ => {}
    }
    let Some(lb) = lower_bound else {
        return open("terms not certified to stay away from zero");
    };
    if !lb.is_positive() {
        return Err(Error::InvalidParameter("nth-term lower bound must be positive".into()));
    }
    let (from, to) = window(s, horizon);
    for n in from..=to {
        if s.term_enclosure(n)?.abs().lo() < lb {
            return open(format!("|a_{n}| falls below the claimed bound {lb}"));
        }
    }
    let cert = Certificate::new(TestKind::NthTerm, Assurance::CallerAsserted).rational("lower_bound", lb.clone()).index("N", from);
    Ok(Outcome::Decided(Verdict::diverges(cert)))
}

fn comparison(s: &SeriesHandle, partner: &SeriesHandle, policy: &[Test], relation: Relation, factor: &Rational, horizon: u64) -> Result<Outcome> {
    let (from, to) = window(s, horizon);
    for n in from..=to {
        let a = s.term_enclosure(n)?;
        let b = partner.term_enclosure(n)?.scale(factor);
        let holds = match relation {
            Relation::Below => a.is_nonneg() && a.hi() <= b.lo(),
            Relation::Above => b.is_nonneg() && a.lo() >= b.hi(),
        };
        if !holds {
            return open(format!("comparison fails at n = {n}"));
        }
    }
    let pv = classify(partner, policy, horizon)?;
    let cert = Certificate::new(TestKind::Comparison, Assurance::CallerAsserted)
        .text("partner", partner.label())
        .rational("k", factor.clone())
        .index("checked_from", from)
        .index("checked_to", to);
    Ok(match (relation, pv.status()) {
        (Relation::Below, Status::Converges) => Outcome::Decided(Verdict::converges(cert, None)),
        (Relation::Above, Status::Diverges) => Outcome::Decided(Verdict::diverges(cert)),
        _ => Outcome::Open(format!("partner verdict {} does not transfer", pv.status())),
    })
}

fn limit_comparison(s: &SeriesHandle, partner: &SeriesHandle, policy: &[Test], horizon: u64) -> Result<Outcome> {
    let (from, to) = window(s, horizon);
    let mut ratios = Vec::new();
    for n in from..=to {
        let b = partner.term_enclosure(n)?;
        if b.sign().is_none() || !b.is_positive() {
            return open(format!("partner term b_{n} is not certified positive"));
        }
        let a = s.term_enclosure(n)?;
        ratios.push(a.div(&b)?.compact(128));
    }
    let w = Enclosure::hull_all(ratios.iter()).unwrap_or_else(Enclosure::zero);
    if !w.is_positive() {
        return open(format!("ratio window {w} is not bounded away from 0"));
    }
    let pv = classify(partner, policy, horizon)?;
    let cert = Certificate::new(TestKind::LimitComparison, Assurance::CallerAsserted).text("partner", partner.label()).enclosure("L_window", w);
    Ok(match pv.status() {
        Status::Converges => Outcome::Decided(Verdict::converges(cert, None)),
        Status::Diverges => Outcome::Decided(Verdict::diverges(cert)),
        Status::Inconclusive => Outcome::Open(String::from("partner is inconclusive")),
    })
}

fn integral(s: &SeriesHandle, f: &FnDescriptor, partner: &Partner, horizon: u64) -> Result<Outcome> {
    let (from, to) = window(s, horizon);
    for n in s.start()..=core::cmp::min(to, s.start() + 64).max(from) {
        let fv = f.eval(&int(n as i64))?;
        if !fv.overlaps(&s.term_enclosure(n)?) {
            return open(format!("f({n}) does not match a_{n}"));
        }
        if !fv.is_positive() {
            return open(format!("f({n}) is not positive"));
        }
    }
    let spec = ImproperSpec::new(f.clone(), Region::Upper(int(s.start() as i64))).with_partner(partner.clone()).nonneg();
    let report = improper_integral(&spec, 8)?;
    let assurance = report.verdict.certificate().map(|c| c.assurance).unwrap_or(Assurance::CallerAsserted);
    let cert = Certificate::new(TestKind::Integral, assurance).text("f", f.name()).text("partner", partner.name());
    Ok(match report.verdict.status() {
        Status::Converges => Outcome::Decided(Verdict::converges(cert, None)),
        Status::Diverges => Outcome::Decided(Verdict::diverges(cert)),
        Status::Inconclusive => Outcome::Open(String::from("improper integral inconclusive")),
    })
}

fn alternating(s: &SeriesHandle, horizon: u64) -> Result<Outcome> {
    let start = s.start();
    let last = core::cmp::max(horizon, start + 1);
    let terms = match s.terms().exact_terms(start, last + 1) {
        Ok(t) => t,
        Err(Error::NotExact { .. }) => return open("alternating test needs exact terms"),
        Err(e) => return Err(e),
    };
    let sign = terms[0].signum();
    if sign.is_zero() {
        return open("first term is zero");
    }
    for (i, t) in terms.iter().enumerate() {
        let expected = if i % 2 == 0 { sign.clone() } else { -sign.clone() };
        if !t.is_zero() && t.signum() != expected {
            return open(format!("signs do not alternate at n = {}", start + i as u64));
        }
        if i > 0 && t.abs() > terms[i - 1].abs() {
            return open(format!("|a_n| increases at n = {}", start + i as u64));
        }
    }
    let assurance = match s.family() {
        SeriesFamily::AltPSeries { .. } | SeriesFamily::NewtonGregory => Assurance::Machine,
        _ => Assurance::CallerAsserted,
    };
    let base = s.terms().clone();
    let b = TermStream::indexed("|a_n|", start, move |n| Ok(crate::sequences::Term::Exact(base.exact_term(n)?.abs())));
    let n_terms = last - start + 1;
    let enc = alternating_sum_with_bound(&b, n_terms)?.scale(&sign);
    let cert = Certificate::new(TestKind::Alternating, assurance).index("N", last).rational("tail_bound", terms[(last - start + 1) as usize].abs());
    Ok(Outcome::Decided(Verdict::converges(cert, Some(enc))))
}

/// Min/max of `|aₙ₊₁/aₙ|` and of `|aₙ|^{1/n}` over `[horizon/2, horizon]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRootWindows {
    pub ratio: Enclosure,
    pub root: Enclosure,
}

fn ratio_window(s: &SeriesHandle, horizon: u64) -> Result<Enclosure> {
    let (from, to) = window(s, horizon);
    let mut prev = s.term_enclosure(from)?.abs();
    let mut items = Vec::new();
    for n in from..=to {
        let next = s.term_enclosure(n + 1)?.abs();
        if prev.sign() == Some(core::cmp::Ordering::Equal) {
            return Err(Error::ZeroTerm(n));
        }
        if !prev.is_positive() {
            return Err(Error::Incomparable(n, n + 1));
        }
        items.push(next.div(&prev)?.compact(128));
        prev = next;
    }
    Ok(Enclosure::hull_all(items.iter()).unwrap_or_else(Enclosure::zero))
}

fn root_window(s: &SeriesHandle, horizon: u64) -> Result<Enclosure> {
    let (from, to) = window(s, horizon);
    let from = core::cmp::max(from, 1);
    let mut items = Vec::new();
    for n in from..=to {
        let a = s.term_enclosure(n)?.abs();
        let k = u32::try_from(n).map_err(|_| Error::InvalidParameter("horizon too large".into()))?;
        let lo = rational::nth_root_bracket(a.lo(), k, 48)?.0;
        let hi = rational::nth_root_bracket(a.hi(), k, 48)?.1;
        items.push(Enclosure::new(lo, hi)?);
    }
    Ok(Enclosure::hull_all(items.iter()).unwrap_or_else(Enclosure::zero))
}

pub fn ratio_root_scan(s: &SeriesHandle, horizon: u64) -> Result<RatioRootWindows> {
    Ok(RatioRootWindows { ratio: ratio_window(s, horizon)?, root: root_window(s, horizon)? })
}

fn ratio(s: &SeriesHandle, delta: &Rational, horizon: u64) -> Result<Outcome> {
    let w = match ratio_window(s, horizon) {
        Ok(w) => w,
        Err(Error::ZeroTerm(n)) => return open(format!("zero term at n = {n}")),
        Err(e) => return Err(e),
    };
    let one = Rational::one();
    let below = w.hi() < &(&one - delta);
    let above = w.lo() > &(&one + delta);
    // families where the window bound holds for every later n as well
    let machine = match s.family() {
        SeriesFamily::Geometric { .. } => true,
        SeriesFamily::ExpSeries { .. } => below,
        SeriesFamily::FactorialPower { .. } => above,
        SeriesFamily::PowerRatio { b, c } => below && b.abs() < *c,
        _ => false,
    };
    let assurance = if machine { Assurance::Machine } else { Assurance::CallerAsserted };
    let cert = Certificate::new(TestKind::Ratio, assurance).enclosure("window", w.clone()).rational("delta", delta.clone());
    if below {
        Ok(Outcome::Decided(Verdict::converges(cert, None)))
    } else if above {
        Ok(Outcome::Decided(Verdict::diverges(cert)))
    } else {
        open(format!("ratio window {w} straddles 1 within delta"))
    }
}

fn root(s: &SeriesHandle, delta: &Rational, horizon: u64) -> Result<Outcome> {
    let w = root_window(s, horizon)?;
    let one = Rational::one();
    let assurance = if matches!(s.family(), SeriesFamily::Geometric { .. }) { Assurance::Machine } else { Assurance::CallerAsserted };
    let cert = Certificate::new(TestKind::Root, assurance).enclosure("window", w.clone()).rational("delta", delta.clone());
    if w.hi() < &(&one - delta) {
        Ok(Outcome::Decided(Verdict::converges(cert, None)))
    } else if w.lo() > &(&one + delta) {
        Ok(Outcome::Decided(Verdict::diverges(cert)))
    } else {
        open(format!("root window {w} straddles 1 within delta"))
    }
}
