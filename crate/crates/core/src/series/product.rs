//! Infinite products `Π uₙ` reduced to series.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{classify, SeriesHandle, Test};
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::powerseries::elementary;
use crate::rational::{int, rat, Rational};
use crate::sequences::{Term, TermStream, TERM_BITS};
use crate::verdict::{Assurance, Certificate, Status, TestKind, Verdict};

/// Raw partial products are formed over at most this many factors.
pub const RAW_CAP: u64 = 4096;

const LN_BITS: u32 = 96;

pub type ExactPartial = Arc<dyn Fn(u64) -> Rational + Send + Sync>;
pub type EnclosedPartial = Arc<dyn Fn(u64) -> Result<Enclosure> + Send + Sync>;

/// Registered closed form for the partial products `Pₙ`.
#[derive(Clone)]
pub enum ClosedForm {
    Exact { partial: ExactPartial, limit: Option<Rational> },
    Enclosed { partial: EnclosedPartial, limit: Option<Enclosure> },
}

impl ClosedForm {
    fn at(&self, n: u64) -> Result<Enclosure> {
        match self {
            ClosedForm::Exact { partial, .. } => Ok(Enclosure::point(partial(n))),
            ClosedForm::Enclosed { partial, .. } => partial(n),
        }
    }

    fn limit(&self) -> Option<Enclosure> {
        match self {
            ClosedForm::Exact { limit, .. } => limit.clone().map(Enclosure::point),
            ClosedForm::Enclosed { limit, .. } => limit.clone(),
        }
    }
}

#[derive(Clone)]
pub enum ProductForm {
    /// `uₙ = 1 + aₙ`, `aₙ > 0`.
    OnePlus(SeriesHandle),
    /// `uₙ = 1 − aₙ`, `aₙ ∈ (0, 1)`.
    OneMinus(SeriesHandle),
    /// `|ln uₙ| ≤ k·bₙ` for a partner series `Σ bₙ`.
    LogMajorant {
        partner: SeriesHandle,
        factor: Rational,
        policy: Vec<Test>,
    },
    General,
}

#[derive(Clone)]
pub struct ProductHandle {
    factors: TermStream,
    zero_indices: Vec<u64>,
    form: ProductForm,
    closed_form: Option<ClosedForm>,
}

impl core::fmt::Debug for ProductHandle {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProductHandle").field("factors", &self.factors).field("zero_indices", &self.zero_indices).finish()
    }
}

fn shifted(a: &SeriesHandle, sign: i64) -> TermStream {
    let base = a.clone();
    let label = format!("1 {} {}", if sign > 0 { "+" } else { "-" }, a.label());
    TermStream::indexed(label, a.start(), move |n| {
        Ok(match base.terms().term(n)? {
            Term::Exact(r) => Term::Exact(int(1) + r * int(sign)),
            other => Term::Approx(other.enclosure(TERM_BITS).scale(&int(sign)).shift(&int(1))),
        })
    })
}

impl ProductHandle {
    pub fn new(factors: TermStream, form: ProductForm) -> Self {
        ProductHandle { factors, zero_indices: Vec::new(), form, closed_form: None }
    }

    pub fn one_plus(a: SeriesHandle) -> Self {
        Self::new(shifted(&a, 1), ProductForm::OnePlus(a))
    }

    pub fn one_minus(a: SeriesHandle) -> Self {
        Self::new(shifted(&a, -1), ProductForm::OneMinus(a))
    }

    pub fn with_zero_indices(mut self, zeros: Vec<u64>) -> Self {
        self.zero_indices = zeros;
        self
    }

    pub fn with_closed_form(mut self, c: ClosedForm) -> Self {
        self.closed_form = Some(c);
        self
    }

    pub fn factors(&self) -> &TermStream {
        &self.factors
    }

    pub fn form(&self) -> &ProductForm {
        &self.form
    }

    /// First index past the registered zeros.
    fn first_live(&self) -> u64 {
        self.zero_indices.iter().max().map_or(self.factors.start(), |z| z + 1)
    }

    /// `Σ ln uₙ` over the live indices, with enclosed terms.
    pub fn log_series(&self) -> SeriesHandle {
        let base = self.factors.clone();
        let stream = TermStream::indexed(format!("ln({})", self.factors.label()), self.first_live(), move |n| {
            let u = base.term(n)?.enclosure(TERM_BITS);
            if !u.is_positive() {
                return Err(Error::NonpositiveFactor(n));
            }
            if u.as_point().is_some_and(One::is_one) {
                return Ok(Term::Exact(Rational::zero()));
            }
            if let Some(t) = u.as_point().map(|x| x - int(1)).filter(|t| t.abs() <= rat(1, 2)) {
                return Ok(Term::Approx(elementary::ln1p(&t, LN_BITS)?));
            }
            Ok(Term::Approx(elementary::ln_enclosure(&u, LN_BITS)?.round_outward(LN_BITS)))
        });
        SeriesHandle::custom(stream)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub verdict: Verdict,
    /// `(n, Pₙ)` at powers of two and at the last raw index.
    pub partial_products: Vec<(u64, Enclosure)>,
    /// Number of raw partial products compared against the closed form.
    pub closed_form_checked: u64,
}

/// Decides convergence of `Π uₙ` through the associated series.
pub fn product_converges(p: &ProductHandle, policy: &[Test], horizon: u64) -> Result<ProductReport> {
    let start = p.factors.start();
    let live = p.first_live();
    let raw_end = core::cmp::min(horizon, start + RAW_CAP - 1);
    let mut product = Enclosure::point(int(1));
    let mut partial_products = Vec::new();
    let mut checked = 0;
    for n in start..=raw_end {
        let u = p.factors.term(n)?.enclosure(TERM_BITS);
        if n >= live && !u.is_positive() {
            return Err(Error::NonpositiveFactor(n));
        }
        product = (&product * &u).compact(TERM_BITS * 2);
        if let Some(cf) = &p.closed_form {
            let expected = cf.at(n)?;
            if !expected.overlaps(&product) {
                return Err(Error::ClaimViolated { index: n, what: format!("registered partial product {expected}") });
            }
            checked += 1;
        }
        if (n - start + 1).is_power_of_two() || n == raw_end {
            partial_products.push((n, product.clone()));
        }
    }
    if let Some(cf) = &p.closed_form {
        if horizon > raw_end {
            partial_products.push((horizon, cf.at(horizon)?));
        }
    }
    let mut verdict = series_verdict(p, policy, horizon)?;
    if verdict.status() == Status::Converges {
        let value = if !p.zero_indices.is_empty() { Some(Enclosure::zero()) } else { p.closed_form.as_ref().and_then(ClosedForm::limit) };
        let (_, cert, _) = verdict.into_parts();
        verdict = Verdict::converges(cert.unwrap_or_else(|| Certificate::new(TestKind::ProductLog, Assurance::CallerAsserted)), value);
    }
    Ok(ProductReport { verdict, partial_products, closed_form_checked: checked })
}

fn series_verdict(p: &ProductHandle, policy: &[Test], horizon: u64) -> Result<Verdict> {
    let check_terms = |a: &SeriesHandle, below_one: bool| -> Result<()> {
        let end = core::cmp::min(horizon, a.start() + RAW_CAP - 1);
        for n in core::cmp::max(a.start(), p.first_live())..=end {
            let e = a.term_enclosure(n)?;
            if !e.is_positive() || (below_one && e.hi() >= &int(1)) {
                let what = if below_one { "a_n in (0, 1)" } else { "a_n > 0" };
                return Err(Error::ClaimViolated { index: n, what: what.into() });
            }
        }
        Ok(())
    };
    let (series, transfer) = match &p.form {
        ProductForm::OnePlus(a) => {
            check_terms(a, false)?;
            (a, Assurance::Machine)
        }
        ProductForm::OneMinus(a) => {
            check_terms(a, true)?;
            (a, Assurance::Machine)
        }
        ProductForm::LogMajorant { partner, factor, policy: partner_policy } => {
            let logs = p.log_series();
            let end = core::cmp::min(horizon, logs.start() + RAW_CAP - 1);
            for n in logs.start()..=end {
                let l = logs.term_enclosure(n)?.mag();
                let b = partner.term_enclosure(n)?.scale(factor);
                if &l > b.lo() {
                    return Err(Error::ClaimViolated { index: n, what: format!("|ln u_n| <= {factor} b_n") });
                }
            }
            let v = classify(partner, partner_policy, horizon)?;
            let cert = Certificate::new(TestKind::ProductLog, Assurance::CallerAsserted)
                .text("partner", partner.label())
                .rational("k", factor.clone())
                .text("series_verdict", v.status().as_str());
            return Ok(match v.status() {
                Status::Converges => Verdict::converges(cert, None),
                _ => Verdict::inconclusive(Some(cert)),
            });
        }
        ProductForm::General => return Ok(Verdict::inconclusive(None)),
    };
    let v = classify(series, policy, horizon)?;
    let inner = v.certificate().cloned();
    let assurance = match &inner {
        Some(c) if c.assurance != Assurance::Machine => c.assurance,
        _ => transfer,
    };
    let mut cert = Certificate::new(TestKind::ProductLog, assurance)
        .text("series", series.label())
        .text("series_test", inner.as_ref().map_or("none", |c| c.test.as_str()));
    if let Some(c) = inner {
        cert.trace = c.trace;
    }
    Ok(match v.status() {
        Status::Converges => Verdict::converges(cert, None),
        Status::Diverges => Verdict::diverges(cert),
        Status::Inconclusive => Verdict::inconclusive(Some(cert)),
    })
}

/// Verdict for `Σ |ln uₙ|` by limit comparison with `Σ aₙ`; agrees with
/// [`product_converges`] for the `1 ± aₙ` forms.
pub fn log_series_verdict(p: &ProductHandle, policy: &[Test], horizon: u64) -> Result<Verdict> {
    let a = match &p.form {
        ProductForm::OnePlus(a) | ProductForm::OneMinus(a) => a.clone(),
        _ => return Err(Error::InvalidParameter("log-series comparison needs a 1 ± a_n form".into())),
    };
    let logs = p.log_series().abs();
    let test = Test::LimitComparison { partner: alloc::boxed::Box::new(a), partner_policy: policy.to_vec() };
    classify(&logs, &[test], horizon)
}
