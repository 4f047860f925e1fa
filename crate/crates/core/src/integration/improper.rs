//! Improper integrals over doubling horizons with partner tail bounds.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::integration::integrate_enclosure;
use crate::powerseries::elementary;
use crate::rational::{self, int, Rational};
use crate::verdict::{Assurance, Certificate, TestKind, Verdict};

const BITS: u32 = 96;

/// Integration region; the named endpoint is where the integral is improper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// `[a, ∞)`.
    Upper(Rational),
    /// `(−∞, b]`.
    Lower(Rational),
    /// `(a, b]`, singular at `a`.
    OpenLeft(Rational, Rational),
    /// `[a, b)`, singular at `b`.
    OpenRight(Rational, Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartnerRelation {
    /// The partner is the integrand itself, so its tail is exact.
    Identical,
    /// `|f| ≤ g` beyond the cutoffs.
    Dominates,
    /// `0 ≤ g ≤ f` beyond the cutoffs.
    Minorizes,
}

pub type TailFn = Arc<dyn Fn(&Rational) -> Result<Enclosure> + Send + Sync>;

/// A comparison function with a registered closed-form tail.
///
/// `tail(c)` encloses the partner's integral over the part of the region cut
/// off at `c` (for example `∫_c^∞ g`). For divergent partners it encloses
/// `∫` from the region's regular end to `c`, which grows without bound.
#[derive(Clone)]
pub struct Partner {
    name: String,
    relation: PartnerRelation,
    converges: bool,
    tail: TailFn,
}

impl core::fmt::Debug for Partner {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Partner").field("name", &self.name).field("relation", &self.relation).field("converges", &self.converges).finish()
    }
}

fn pow_bracket(x: &Rational, e: &Rational) -> Result<Enclosure> {
    if rational::is_integer(e) {
        let k = i64::try_from(e.numer().clone()).map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
        return Ok(Enclosure::point(rational::powi(x, k)?));
    }
    let (lo, hi) = rational::rational_pow_bracket(x, e, BITS)?;
    Enclosure::new(lo, hi)
}

impl Partner {
    pub fn new(name: impl Into<String>, relation: PartnerRelation, converges: bool, tail: TailFn) -> Self {
        Partner { name: name.into(), relation, converges, tail }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relation(&self) -> PartnerRelation {
        self.relation
    }

    pub fn converges(&self) -> bool {
        self.converges
    }

    /// `g = c·x^{−p}` on `[a, ∞)` with `a > 0`; integrable iff `p > 1`.
    pub fn power_at_infinity(c: Rational, p: Rational, a: Rational, relation: PartnerRelation) -> Result<Self> {
        if !a.is_positive() || c.is_negative() {
            return Err(Error::InvalidParameter("power partner needs a > 0 and c ≥ 0".into()));
        }
        let converges = p > Rational::one();
        let name = format!("{c}*x^-{p}");
        let e = Rational::one() - &p;
        let tail: TailFn = if converges {
            // ∫_T^∞ c x^{−p} = c T^{1−p}/(p−1)
            Arc::new(move |t: &Rational| Ok(pow_bracket(t, &e)?.scale(&(&c / (&p - int(1))))))
        } else if p.is_one() {
            Arc::new(move |t: &Rational| {
                let l = elementary::ln(&(t / &a), BITS)?;
                Ok(l.scale(&c))
            })
        } else {
            Arc::new(move |t: &Rational| {
                let grow = &pow_bracket(t, &e)? - &pow_bracket(&a, &e)?;
                Ok(grow.scale(&(&c / &e)))
            })
        };
        Ok(Partner::new(name, relation, converges, tail))
    }

    /// `g = c·(x − s)^{−p}` near the singular point `s`, on `(s, b]`;
    /// integrable iff `p < 1`.
    pub fn power_at_singularity(c: Rational, p: Rational, s: Rational, b: Rational, relation: PartnerRelation) -> Result<Self> {
        if b <= s || c.is_negative() {
            return Err(Error::InvalidParameter("singular partner needs b > s and c ≥ 0".into()));
        }
        let converges = p < Rational::one();
        let name = format!("{c}*(x-{s})^-{p}");
        let e = Rational::one() - &p;
        let tail: TailFn = if converges {
            // ∫_s^{s+ε} c u^{−p} du = c ε^{1−p}/(1−p)
            Arc::new(move |cut: &Rational| Ok(pow_bracket(&(cut - &s), &e)?.scale(&(&c / &e))))
        } else if p.is_one() {
            Arc::new(move |cut: &Rational| Ok(elementary::ln(&((&b - &s) / (cut - &s)), BITS)?.scale(&c)))
        } else {
            Arc::new(move |cut: &Rational| {
                let grow = &pow_bracket(&(cut - &s), &e)? - &pow_bracket(&(&b - &s), &e)?;
                Ok(grow.scale(&(&c / (&p - int(1)))))
            })
        };
        Ok(Partner::new(name, relation, converges, tail))
    }

    /// `g = c·e^{−λx}` on `[a, ∞)`.
    pub fn exp_decay(c: Rational, lambda: Rational, relation: PartnerRelation) -> Result<Self> {
        if !lambda.is_positive() || c.is_negative() {
            return Err(Error::InvalidParameter("exponential partner needs λ > 0 and c ≥ 0".into()));
        }
        let name = format!("{c}*exp(-{lambda}x)");
        let tail: TailFn = Arc::new(move |t: &Rational| Ok(elementary::exp(&-(&lambda * t), BITS)?.scale(&(&c / &lambda))));
        Ok(Partner::new(name, relation, true, tail))
    }
}

#[derive(Clone, Debug)]
pub struct ImproperSpec {
    pub f: FnDescriptor,
    pub region: Region,
    pub partner: Option<Partner>,
    /// Caller claim `f ≥ 0` on the region.
    pub nonneg: bool,
    /// Points where `f` is unbounded.
    pub singular: Vec<Rational>,
}

impl ImproperSpec {
    pub fn new(f: FnDescriptor, region: Region) -> Self {
        ImproperSpec { f, region, partner: None, nonneg: false, singular: Vec::new() }
    }

    pub fn with_partner(mut self, p: Partner) -> Self {
        self.partner = Some(p);
        self
    }

    pub fn nonneg(mut self) -> Self {
        self.nonneg = true;
        self
    }

    pub fn with_singular(mut self, s: Vec<Rational>) -> Self {
        self.singular = s;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizonStep {
    pub cutoff: Rational,
    /// Integral over the closed part of the region.
    pub body: Enclosure,
    /// Partner tail at this cutoff.
    pub tail: Option<Enclosure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImproperReport {
    pub verdict: Verdict,
    pub trace: Vec<HorizonStep>,
}

/// The closed piece `[lo, hi]` at schedule step `k ≥ 1`, and its cutoff.
fn piece(region: &Region, k: u32) -> (Rational, Rational, Rational) {
    let two_k = Rational::from_integer(rational::pow2(k));
    match region {
        Region::Upper(a) => {
            let t = a + &two_k;
            (a.clone(), t.clone(), t)
        }
        Region::Lower(b) => {
            let t = b - &two_k;
            (t.clone(), b.clone(), t)
        }
        Region::OpenLeft(a, b) => {
            let c = a + (b - a) / &two_k;
            (c.clone(), b.clone(), c)
        }
        Region::OpenRight(a, b) => {
            let c = b - (b - a) / &two_k;
            (a.clone(), c.clone(), c)
        }
    }
}

fn check_singular(spec: &ImproperSpec) -> Result<()> {
    let inside = |s: &Rational| match &spec.region {
        Region::Upper(a) => s >= a,
        Region::Lower(b) => s <= b,
        Region::OpenLeft(a, b) => s > a && s <= b,
        Region::OpenRight(a, b) => s >= a && s < b,
    };
    match spec.singular.iter().find(|s| inside(s)) {
        Some(s) => Err(Error::SingularInside(s.to_string())),
        None => Ok(()),
    }
}

fn body(f: &FnDescriptor, lo: &Rational, hi: &Rational, width: &Rational) -> Result<Enclosure> {
    if let Some(anti) = f.antiderivative() {
        return Ok(&anti.eval(hi)? - &anti.eval(lo)?);
    }
    Ok(integrate_enclosure(f, lo, hi, width)?.enclosure)
}

/// Evaluates `∫` over the closed pieces of the doubling schedule
/// `k = 1 … steps`; convergence is certified only through a partner.
pub fn improper_integral(spec: &ImproperSpec, steps: u32) -> Result<ImproperReport> {
    if let Region::OpenLeft(a, b) | Region::OpenRight(a, b) = &spec.region {
        if a >= b {
            return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
        }
    }
    check_singular(spec)?;
    let mut trace = Vec::new();
    let mut value: Option<Enclosure> = None;
    for k in 1..=steps.max(1) {
        let (lo, hi, cutoff) = piece(&spec.region, k);
        let width = Rational::new(1.into(), rational::pow2(k + 8));
        let b = body(&spec.f, &lo, &hi, &width)?;
        let tail = match &spec.partner {
            Some(p) => Some((p.tail)(&cutoff)?),
            None => None,
        };
        if let (Some(p), Some(t)) = (&spec.partner, &tail) {
            if p.converges {
                let step_value = match p.relation {
                    PartnerRelation::Identical => &b + t,
                    PartnerRelation::Dominates if spec.nonneg => Enclosure::new(b.lo().clone(), b.hi() + t.hi())?,
                    PartnerRelation::Dominates => b.widen(t.hi()),
                    PartnerRelation::Minorizes => b.clone(),
                };
                if p.relation != PartnerRelation::Minorizes {
                    value = Some(match value {
                        Some(v) => v.intersect(&step_value).unwrap_or(step_value),
                        None => step_value,
                    });
                }
            }
        }
        trace.push(HorizonStep { cutoff, body: b, tail });
    }
    let verdict = match &spec.partner {
        Some(p) if p.converges && p.relation != PartnerRelation::Minorizes => {
            let assurance = if p.relation == PartnerRelation::Identical { Assurance::Machine } else { Assurance::CallerAsserted };
            let kind = if p.relation == PartnerRelation::Identical { TestKind::ImproperAntiderivative } else { TestKind::ImproperComparison };
            let cert = Certificate::new(kind, assurance).text("partner", p.name.clone()).index("steps", trace.len() as u64);
            Verdict::converges(cert, value)
        }
        Some(p) if !p.converges && p.relation == PartnerRelation::Minorizes => {
            let last = trace.last().and_then(|s| s.tail.clone()).unwrap_or_else(Enclosure::zero);
            let cert =
                Certificate::new(TestKind::ImproperComparison, Assurance::CallerAsserted).text("partner", p.name.clone()).enclosure("partner_growth", last);
            Verdict::diverges(cert)
        }
        _ => Verdict::inconclusive(None),
    };
    Ok(ImproperReport { verdict, trace })
}

/// Symmetric truncations `∫_{c−R}^{c+R} f` for `R = 2, 4, …`; a trace only,
/// never a certified value.
pub fn principal_value_trace(f: &FnDescriptor, center: &Rational, steps: u32) -> Result<Vec<(Rational, Enclosure)>> {
    let mut out = Vec::new();
    for k in 1..=steps {
        let r = Rational::from_integer(rational::pow2(k));
        let width = Rational::new(1.into(), rational::pow2(k + 8));
        out.push((r.clone(), body(f, &(center - &r), &(center + &r), &width)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::rational::rat;
    use crate::verdict::Status;

    fn inv_square() -> FnDescriptor {
        let anti = FnDescriptor::exact("-1/x", |x| Ok(-x.recip()));
        FnDescriptor::exact("x^-2", |x| rational::powi(x, -2)).with_antiderivative(anti)
    }

    #[test]
    fn inverse_square_is_one() {
        let partner = Partner::power_at_infinity(int(1), int(2), int(1), PartnerRelation::Identical).unwrap();
        let spec = ImproperSpec::new(inv_square(), Region::Upper(int(1))).with_partner(partner).nonneg();
        let r = improper_integral(&spec, 10).unwrap();
        assert_eq!(r.verdict.status(), Status::Converges);
        assert_eq!(r.verdict.value(), Some(&Enclosure::point(int(1))));
        assert_eq!(r.trace.len(), 10);
    }

    #[test]
    fn diverges_by_comparison() {
        let anti = FnDescriptor::new("ln(x^2+1)/2", |x| Ok(elementary::ln(&(x * x + int(1)), BITS)?.scale(&rat(1, 2))));
        let f = FnDescriptor::exact("x/(x^2+1)", |x| Ok(x / (x * x + int(1)))).with_antiderivative(anti);
        let partner = Partner::power_at_infinity(rat(1, 2), int(1), int(1), PartnerRelation::Minorizes).unwrap();
        let spec = ImproperSpec::new(f, Region::Upper(int(0))).with_partner(partner);
        let r = improper_integral(&spec, 6).unwrap();
        assert_eq!(r.verdict.status(), Status::Diverges);
        let bodies: Vec<_> = r.trace.iter().map(|s| s.body.lo().clone()).collect();
        assert!(bodies.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_sqrt_at_zero() {
        let anti = FnDescriptor::new("2sqrt(x)", |x| Ok(elementary::sqrt(x, BITS)?.scale(&int(2))));
        let f = FnDescriptor::new("x^-1/2", |x| elementary::sqrt(x, BITS)?.recip()).with_antiderivative(anti);
        let partner = Partner::power_at_singularity(int(1), rat(1, 2), int(0), int(1), PartnerRelation::Identical).unwrap();
        let spec = ImproperSpec::new(f, Region::OpenLeft(int(0), int(1))).with_partner(partner).nonneg();
        let r = improper_integral(&spec, 12).unwrap();
        let v = r.verdict.value().unwrap();
        assert!(v.contains(&int(2)));
        assert!(v.width() < rational::ten_pow_neg(20));
    }

    #[test]
    fn no_partner_is_inconclusive() {
        let f = FnDescriptor::polynomial(Poly::from_ints(&[1]));
        let r = improper_integral(&ImproperSpec::new(f.clone(), Region::Upper(int(0))), 3).unwrap();
        assert_eq!(r.verdict.status(), Status::Inconclusive);
        let bad = ImproperSpec::new(f, Region::Upper(int(0))).with_singular(alloc::vec![int(5)]);
        assert!(matches!(improper_integral(&bad, 3), Err(Error::SingularInside(_))));
    }

    #[test]
    fn principal_value_of_odd_function() {
        let f = FnDescriptor::polynomial(Poly::from_ints(&[0, 1]));
        let t = principal_value_trace(&f, &int(0), 5).unwrap();
        assert!(t.iter().all(|(_, e)| e == &Enclosure::zero()));
    }
}
