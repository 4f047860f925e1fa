//! Power series `Σ cₙ (x − x₀)ⁿ` with lazily generated exact coefficients.

pub mod constants;
pub mod elementary;
mod majorant;
pub mod taylor;

use core::fmt;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

pub use majorant::Majorant;

const PREFILL: u64 = 48;

/// `gen(n, prefix)` returns `cₙ` given `c₀ … cₙ₋₁`.
pub type CoeffGen = Arc<dyn Fn(u64, &[Rational]) -> Rational + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Exact(Rational),
    Infinite,
    Zero,
    /// Lower bound only, as produced by the Cauchy product rule.
    AtLeast(Rational),
    /// Scan enclosure of `|cₙ/cₙ₊₁|`.
    Window(Enclosure),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Converges,
    Diverges,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusInfo {
    pub radius: Radius,
    pub left: Endpoint,
    pub right: Endpoint,
}

impl RadiusInfo {
    pub fn of(radius: Radius) -> Self {
        RadiusInfo { radius, left: Endpoint::Unknown, right: Endpoint::Unknown }
    }

    fn endpoints(mut self, left: Endpoint, right: Endpoint) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    /// Is convergence at distance `d` from the center implied?
    pub fn converges_at_distance(&self, d: &Rational) -> Option<bool> {
        match &self.radius {
            Radius::Infinite => Some(true),
            Radius::Zero => Some(d.is_zero()),
            Radius::Exact(r) if d < r => Some(true),
            Radius::Exact(r) if d > r => Some(false),
            Radius::AtLeast(r) if d < r => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusMode {
    ClosedForm,
    RatioWindow(u64),
}

#[derive(Clone)]
pub struct PowerSeries {
    center: Rational,
    gen: CoeffGen,
    cache: Vec<Rational>,
    radius: RadiusInfo,
    majorant: Option<Majorant>,
    label: String,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("label", &self.label)
            .field("center", &self.center)
            .field("radius", &self.radius)
            .field("cached", &self.cache.len())
            .finish()
    }
}

/// Partial sum with a tail bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailEval {
    pub enclosure: Enclosure,
    pub partial_sum: Rational,
    pub tail: Option<Rational>,
    pub certified: bool,
}

impl PowerSeries {
    pub fn new<F>(label: impl Into<String>, center: Rational, radius: RadiusInfo, gen: F) -> Self
    where
        F: Fn(u64, &[Rational]) -> Rational + Send + Sync + 'static,
    {
        PowerSeries { center, gen: Arc::new(gen), cache: Vec::new(), radius, majorant: None, label: label.into() }
    }

    /// Closed-form coefficients `n ↦ cₙ`.
    pub fn from_fn<F>(label: impl Into<String>, radius: RadiusInfo, f: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self::new(label, Rational::zero(), radius, move |n, _| f(n))
    }

    /// Finitely supported coefficients.
    pub fn polynomial(label: impl Into<String>, coeffs: Vec<Rational>) -> Self {
        let c = coeffs.clone();
        let mut ps = Self::from_fn(label, RadiusInfo::of(Radius::Infinite), move |n| c.get(n as usize).cloned().unwrap_or_else(Rational::zero));
        ps.majorant = Some(Majorant::Finite(coeffs));
        ps
    }

    pub fn zero() -> Self {
        Self::polynomial("0", Vec::new())
    }

    /// `Σ xⁿ`.
    pub fn geometric() -> Self {
        Self::from_fn("geometric", RadiusInfo::of(Radius::Exact(Rational::one())), |_| Rational::one())
            .with_majorant(Majorant::Fixed { m: Rational::one(), r2: Rational::one() })
    }

    /// `Σ xⁿ/n!`.
    pub fn exp() -> Self {
        Self::new("exp", Rational::zero(), RadiusInfo::of(Radius::Infinite), |n, prev| match n {
            0 => Rational::one(),
            _ => &prev[n as usize - 1] / int(n as i64),
        })
        .with_majorant(Majorant::Entire)
    }

    /// `Σ n! xⁿ`.
    pub fn factorial() -> Self {
        Self::new("factorial", Rational::zero(), RadiusInfo::of(Radius::Zero), |n, prev| match n {
            0 => Rational::one(),
            _ => &prev[n as usize - 1] * int(n as i64),
        })
    }

    /// `Σ_{n≥1} xⁿ/n²`.
    pub fn inverse_squares() -> Self {
        Self::from_fn("inverse_squares", RadiusInfo::of(Radius::Exact(Rational::one())).endpoints(Endpoint::Converges, Endpoint::Converges), |n| {
            if n == 0 {
                Rational::zero()
            } else {
                Rational::new(1.into(), (n * n).into())
            }
        })
        .with_majorant(Majorant::Fixed { m: Rational::one(), r2: Rational::one() })
    }

    /// Generalized binomial series `Σ C(α, k) xᵏ`.
    pub fn binomial(alpha: Rational) -> Self {
        let natural = rational::is_integer(&alpha) && !alpha.is_negative();
        let radius = if natural { Radius::Infinite } else { Radius::Exact(Rational::one()) };
        let a = alpha.clone();
        Self::new(format!("binomial({alpha})"), Rational::zero(), RadiusInfo::of(radius), move |n, prev| match n {
            0 => Rational::one(),
            _ => &prev[n as usize - 1] * (&a - int(n as i64 - 1)) / int(n as i64),
        })
        .with_majorant(Majorant::Binomial(alpha))
    }

    pub fn with_majorant(mut self, m: Majorant) -> Self {
        self.majorant = Some(m);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_radius(mut self, r: RadiusInfo) -> Self {
        self.radius = r;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius_info(&self) -> &RadiusInfo {
        &self.radius
    }

    pub fn majorant(&self) -> Option<&Majorant> {
        self.majorant.as_ref()
    }

    fn prefilled(&self) -> PowerSeries {
        let mut p = self.clone();
        p.fill(PREFILL);
        p
    }

    /// Memoizes `c₀ … cₙ`.
    pub fn fill(&mut self, n: u64) {
        while (self.cache.len() as u64) <= n {
            let k = self.cache.len() as u64;
            let c = (self.gen)(k, &self.cache);
            self.cache.push(c);
        }
    }

    /// `c₀ … cₙ`, served from the cache when it is long enough.
    pub fn coeffs(&self, n: u64) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.cache.iter().take(n as usize + 1).cloned().collect();
        while (out.len() as u64) <= n {
            let k = out.len() as u64;
            let c = (self.gen)(k, &out);
            out.push(c);
        }
        out
    }

    pub fn coeff(&self, n: u64) -> Rational {
        match self.cache.get(n as usize) {
            Some(c) => c.clone(),
            None => self.coeffs(n).pop().unwrap_or_default(),
        }
    }

    /// Radius by registered closed form or by a ratio scan over `[h/2, h]`.
    pub fn radius(&self, mode: RadiusMode) -> Result<RadiusInfo> {
        match mode {
            RadiusMode::ClosedForm => match self.radius.radius {
                Radius::Unknown | Radius::Window(_) => Err(Error::MissingMetadata(format!("{}: no closed-form radius", self.label))),
                _ => Ok(self.radius.clone()),
            },
            RadiusMode::RatioWindow(h) => {
                let c = self.coeffs(h + 1);
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for n in h / 2..=h {
                    let (a, b) = (&c[n as usize], &c[n as usize + 1]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let q = (a / b).abs();
                    lo = Some(lo.map_or(q.clone(), |l| core::cmp::min(l, q.clone())));
                    hi = Some(hi.map_or(q.clone(), |u| core::cmp::max(u, q)));
                }
                match (lo, hi) {
                    (Some(l), Some(u)) => Ok(RadiusInfo::of(Radius::Window(Enclosure::new(l, u)?))),
                    _ => Err(Error::AllZeroTail),
                }
            }
        }
    }

    /// Partial sum through `x^n` plus the geometric-domination tail
    /// `M rⁿ⁺¹/(1 − r)`. Without domination data the partial sum is returned
    /// flagged uncertified.
    pub fn eval_with_tail(&self, x: &Rational, n: u64) -> Result<TailEval> {
        let dx = x - &self.center;
        let coeffs = self.coeffs(n);
        let partial = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &dx + c);
        if dx.is_zero() {
            return Ok(TailEval { enclosure: Enclosure::point(partial.clone()), partial_sum: partial, tail: Some(Rational::zero()), certified: true });
        }
        let reach = dx.abs();
        let dominated = self.majorant.as_ref().map(|m| m.dominate(&reach)).transpose()?.flatten();
        match dominated {
            Some((m, r2)) => {
                let r = &reach / &r2;
                let tail = m * rational::powi(&r, n as i64 + 1)? / (Rational::one() - &r);
                Ok(TailEval { enclosure: Enclosure::ball(&partial, &tail), partial_sum: partial, tail: Some(tail), certified: true })
            }
            None => Ok(TailEval { enclosure: Enclosure::point(partial.clone()), partial_sum: partial, tail: None, certified: false }),
        }
    }

    /// `Σ (n+1) cₙ₊₁ (x − x₀)ⁿ`; the radius is copied.
    pub fn derive(&self) -> PowerSeries {
        let base = self.prefilled();
        PowerSeries {
            center: self.center.clone(),
            gen: Arc::new(move |n, _| base.coeff(n + 1) * int(n as i64 + 1)),
            cache: Vec::new(),
            radius: self.radius.clone().endpoints(Endpoint::Unknown, Endpoint::Unknown),
            majorant: self.majorant.clone().map(|m| Majorant::Derive(alloc::boxed::Box::new(m))),
            label: format!("d/dx {}", self.label),
        }
    }

    /// `constant + Σ cₙ (x − x₀)ⁿ⁺¹/(n+1)`; the radius is copied.
    pub fn integrate_termwise(&self, constant: Rational) -> PowerSeries {
        let base = self.prefilled();
        let c0 = constant.clone();
        PowerSeries {
            center: self.center.clone(),
            gen: Arc::new(move |n, _| match n {
                0 => constant.clone(),
                _ => base.coeff(n - 1) / int(n as i64),
            }),
            cache: Vec::new(),
            radius: self.radius.clone().endpoints(Endpoint::Unknown, Endpoint::Unknown),
            majorant: self.majorant.clone().map(|m| Majorant::Integrate(alloc::boxed::Box::new(m), c0)),
            label: format!("∫ {}", self.label),
        }
    }

    /// Coefficient convolution; radius is at least the smaller radius.
    pub fn cauchy_product(&self, other: &PowerSeries) -> Result<PowerSeries> {
        if self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        let radius = match (&self.radius.radius, &other.radius.radius) {
            (Radius::Infinite, Radius::Infinite) => Radius::Infinite,
            (Radius::Infinite, r) | (r, Radius::Infinite) => at_least(r),
            (a, b) => match (radius_lower(a), radius_lower(b)) {
                (Some(x), Some(y)) => Radius::AtLeast(core::cmp::min(x, y)),
                _ => Radius::Unknown,
            },
        };
        let (a, b) = (self.prefilled(), other.prefilled());
        let majorant = match (&self.majorant, &other.majorant) {
            (Some(x), Some(y)) => Some(Majorant::Product(alloc::boxed::Box::new(x.clone()), alloc::boxed::Box::new(y.clone()))),
            _ => None,
        };
        Ok(PowerSeries {
            center: self.center.clone(),
            gen: Arc::new(move |n, _| {
                let ac = a.coeffs(n);
                let bc = b.coeffs(n);
                (0..=n as usize).fold(Rational::zero(), |acc, m| acc + &ac[m] * &bc[n as usize - m])
            }),
            cache: Vec::new(),
            radius: RadiusInfo::of(radius),
            majorant,
            label: format!("({})·({})", self.label, other.label),
        })
    }
}

fn radius_lower(r: &Radius) -> Option<Rational> {
    match r {
        Radius::Exact(x) | Radius::AtLeast(x) => Some(x.clone()),
        Radius::Zero => Some(Rational::zero()),
        _ => None,
    }
}

fn at_least(r: &Radius) -> Radius {
    match radius_lower(r) {
        Some(x) => Radius::AtLeast(x),
        None => Radius::Unknown,
    }
}

/// Sine and cosine from `c₀ = 0`, `c₁ = 1`, `cₙ₊₂ = −cₙ/((n+1)(n+2))`;
/// cosine is the derived series.
pub fn ode_recurrence_sin() -> (PowerSeries, PowerSeries) {
    let sin = PowerSeries::new("sin", Rational::zero(), RadiusInfo::of(Radius::Infinite), |n, prev| match n {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let k = n as i64 - 2;
            -&prev[k as usize] / int((k + 1) * (k + 2))
        }
    })
    .with_majorant(Majorant::Entire);
    let cos = sin.derive().with_label("cos").with_majorant(Majorant::Entire);
    (sin, cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn closed_form_radii() {
        assert_eq!(PowerSeries::exp().radius(RadiusMode::ClosedForm).unwrap().radius, Radius::Infinite);
        assert_eq!(PowerSeries::factorial().radius(RadiusMode::ClosedForm).unwrap().radius, Radius::Zero);
        let sq = PowerSeries::inverse_squares().radius(RadiusMode::ClosedForm).unwrap();
        assert_eq!(sq.radius, Radius::Exact(int(1)));
        assert_eq!((sq.left, sq.right), (Endpoint::Converges, Endpoint::Converges));
    }

    #[test]
    fn ratio_windows() {
        let w = PowerSeries::factorial().radius(RadiusMode::RatioWindow(20)).unwrap();
        assert_eq!(w.radius, Radius::Window(Enclosure::new(rat(1, 21), rat(1, 11)).unwrap()));
        let g = PowerSeries::geometric().radius(RadiusMode::RatioWindow(10)).unwrap();
        assert_eq!(g.radius, Radius::Window(Enclosure::point(int(1))));
        assert_eq!(PowerSeries::zero().radius(RadiusMode::RatioWindow(10)), Err(Error::AllZeroTail));
    }

    #[test]
    fn eval_examples() {
        let g = PowerSeries::geometric().eval_with_tail(&rat(1, 2), 20).unwrap();
        assert!(g.certified && g.enclosure.contains(&int(2)));
        assert!(g.enclosure.width() <= rat(1, 1 << 19));
        let e = PowerSeries::exp().eval_with_tail(&int(0), 5).unwrap();
        assert_eq!(e.enclosure, Enclosure::point(int(1)));
        let d = PowerSeries::geometric().derive().eval_with_tail(&rat(1, 2), 60).unwrap();
        assert!(d.certified && d.enclosure.contains(&int(4)));
        let f = PowerSeries::factorial().eval_with_tail(&rat(1, 10), 5).unwrap();
        assert!(!f.certified);
    }

    #[test]
    fn eval_is_nested() {
        let (sin, _) = ode_recurrence_sin();
        let mut prev = sin.eval_with_tail(&rat(3, 2), 1).unwrap().enclosure;
        for n in 2..30 {
            let cur = sin.eval_with_tail(&rat(3, 2), n).unwrap().enclosure;
            assert!(cur.is_subset_of(&prev));
            prev = cur;
        }
    }

    #[test]
    fn termwise_calculus() {
        let d = PowerSeries::geometric().derive();
        assert_eq!(d.coeffs(4), [1, 2, 3, 4, 5].map(int).to_vec());
        let i = PowerSeries::geometric().integrate_termwise(Rational::zero());
        assert_eq!(i.coeffs(4), alloc::vec![int(0), int(1), rat(1, 2), rat(1, 3), rat(1, 4)]);
        assert!(PowerSeries::polynomial("c", alloc::vec![int(5)]).derive().coeffs(3).iter().all(Zero::is_zero));
        assert_eq!(d.radius_info().radius, Radius::Exact(int(1)));
    }

    #[test]
    fn cauchy_products() {
        let (sin, _) = ode_recurrence_sin();
        let p = PowerSeries::exp().cauchy_product(&sin).unwrap();
        assert_eq!(p.coeffs(5), alloc::vec![int(0), int(1), int(1), rat(1, 3), int(0), rat(-1, 30)]);
        let z = PowerSeries::exp().cauchy_product(&PowerSeries::zero()).unwrap();
        assert!(z.coeffs(6).iter().all(Zero::is_zero));
        let gg = PowerSeries::geometric().cauchy_product(&PowerSeries::geometric()).unwrap();
        assert_eq!(gg.coeffs(5), (1..=6).map(int).collect::<Vec<_>>());
        assert_eq!(gg.radius_info().radius, Radius::AtLeast(int(1)));
        let shifted = PowerSeries::new("s", int(1), RadiusInfo::of(Radius::Infinite), |_, _| Rational::one());
        assert_eq!(shifted.cauchy_product(&sin).unwrap_err(), Error::CenterMismatch);
    }

    #[test]
    fn sin_cos_recurrence() {
        let (sin, cos) = ode_recurrence_sin();
        let s = sin.coeffs(7);
        assert_eq!((s[1].clone(), s[3].clone(), s[5].clone()), (int(1), rat(-1, 6), rat(1, 120)));
        assert!(s.iter().step_by(2).all(Zero::is_zero));
        let c = cos.coeffs(2);
        assert_eq!((c[0].clone(), c[2].clone()), (int(1), rat(-1, 2)));
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(PowerSeries::binomial(int(2)).coeffs(4), [1, 2, 1, 0, 0].map(int).to_vec());
        assert_eq!(PowerSeries::binomial(rat(1, 2)).coeffs(3), alloc::vec![int(1), rat(1, 2), rat(-1, 8), rat(1, 16)]);
        assert_eq!(PowerSeries::binomial(int(-1)).coeffs(4), [1, -1, 1, -1, 1].map(int).to_vec());
        let half = PowerSeries::binomial(rat(1, 2)).eval_with_tail(&rat(1, 2), 40).unwrap();
        assert!(half.certified);
        let sq = &half.enclosure * &half.enclosure;
        assert!(sq.contains(&rat(3, 2)));
    }
}
