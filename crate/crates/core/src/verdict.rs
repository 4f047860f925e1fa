//! Three-valued conclusions with evidence.

use core::fmt;

use alloc::string::String;
use alloc::vec::Vec;

use crate::enclosure::Enclosure;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Converges,
    Diverges,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converges => "converges",
            Status::Diverges => "diverges",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn is_decisive(self) -> bool {
        self != Status::Inconclusive
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which test or construction produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestKind {
    NthTerm,
    Geometric,
    PSeries,
    Comparison,
    LimitComparison,
    Integral,
    Alternating,
    Ratio,
    Root,
    CauchyCriterion,
    AbsConvergence,
    MonotoneBounded,
    CauchyWindow,
    ClosedForm,
    ProductLog,
    WeierstrassM,
    ImproperComparison,
    ImproperAntiderivative,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::NthTerm => "nth_term",
            TestKind::Geometric => "geometric",
            TestKind::PSeries => "p_series",
            TestKind::Comparison => "comparison",
            TestKind::LimitComparison => "limit_comparison",
            TestKind::Integral => "integral",
            TestKind::Alternating => "alternating",
            TestKind::Ratio => "ratio",
            TestKind::Root => "root",
            TestKind::CauchyCriterion => "cauchy_criterion",
            TestKind::AbsConvergence => "abs_convergence",
            TestKind::MonotoneBounded => "monotone_bounded",
            TestKind::CauchyWindow => "cauchy_window",
            TestKind::ClosedForm => "closed_form",
            TestKind::ProductLog => "product_log",
            TestKind::WeierstrassM => "weierstrass_m",
            TestKind::ImproperComparison => "improper_comparison",
            TestKind::ImproperAntiderivative => "improper_antiderivative",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How far a certificate can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assurance {
    /// Every hypothesis was checked with exact arithmetic.
    Machine,
    /// Relies on a metadata claim supplied by the caller.
    CallerAsserted,
    /// Observed at a finite horizon only.
    Empirical,
}

impl Assurance {
    pub fn as_str(self) -> &'static str {
        match self {
            Assurance::Machine => "machine",
            Assurance::CallerAsserted => "caller_asserted",
            Assurance::Empirical => "empirical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Rational(Rational),
    Enclosure(Enclosure),
    Index(u64),
    Text(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Rational(r) => f.write_str(&rational::exact_string(r)),
            Witness::Enclosure(e) => write!(f, "{e}"),
            Witness::Index(n) => write!(f, "{n}"),
            Witness::Text(s) => f.write_str(s),
        }
    }
}

/// One line of the test trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub test: TestKind,
    pub outcome: Status,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub test: TestKind,
    pub witnesses: Vec<(String, Witness)>,
    pub assurance: Assurance,
    pub trace: Vec<TraceEntry>,
}

impl Certificate {
    pub fn new(test: TestKind, assurance: Assurance) -> Self {
        Certificate { test, witnesses: Vec::new(), assurance, trace: Vec::new() }
    }

    pub fn with(mut self, name: &str, w: Witness) -> Self {
        self.witnesses.push((name.into(), w));
        self
    }

    pub fn rational(self, name: &str, r: Rational) -> Self {
        self.with(name, Witness::Rational(r))
    }

    pub fn index(self, name: &str, n: u64) -> Self {
        self.with(name, Witness::Index(n))
    }

    pub fn text(self, name: &str, s: impl Into<String>) -> Self {
        self.with(name, Witness::Text(s.into()))
    }

    pub fn enclosure(self, name: &str, e: Enclosure) -> Self {
        self.with(name, Witness::Enclosure(e))
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }
}

/// A conclusion whose invariants are enforced by its constructors:
/// decisive statuses carry a certificate and only `Converges` carries a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    status: Status,
    certificate: Option<Certificate>,
    value: Option<Enclosure>,
}

impl Verdict {
    pub fn converges(certificate: Certificate, value: Option<Enclosure>) -> Self {
        Verdict { status: Status::Converges, certificate: Some(certificate), value }
    }

    pub fn diverges(certificate: Certificate) -> Self {
        Verdict { status: Status::Diverges, certificate: Some(certificate), value: None }
    }

    pub fn inconclusive(certificate: Option<Certificate>) -> Self {
        Verdict { status: Status::Inconclusive, certificate, value: None }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn value(&self) -> Option<&Enclosure> {
        self.value.as_ref()
    }

    pub fn into_parts(self) -> (Status, Option<Certificate>, Option<Enclosure>) {
        (self.status, self.certificate, self.value)
    }

    /// Replaces the trace stored in the certificate (creating an empty
    /// inconclusive certificate if needed).
    pub fn with_trace(mut self, trace: Vec<TraceEntry>, fallback: TestKind) -> Self {
        match self.certificate.as_mut() {
            Some(c) => c.trace = trace,
            None => {
                let mut c = Certificate::new(fallback, Assurance::Empirical);
                c.trace = trace;
                self.certificate = Some(c);
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn constructors_enforce_invariants() {
        let v = Verdict::converges(Certificate::new(TestKind::Geometric, Assurance::Machine), Some(Enclosure::point(int(2))));
        assert_eq!(v.status(), Status::Converges);
        assert!(v.certificate().is_some());
        let d = Verdict::diverges(Certificate::new(TestKind::NthTerm, Assurance::Machine));
        assert!(d.value().is_none());
        let i = Verdict::inconclusive(None);
        assert!(!i.status().is_decisive());
    }
}
