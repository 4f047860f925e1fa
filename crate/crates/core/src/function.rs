//! Real functions as evaluation oracles plus trusted structural metadata.

use core::cmp::{max, min};
use core::fmt;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, int, Rational};

pub type EvalFn = Arc<dyn Fn(&Rational) -> Result<Enclosure> + Send + Sync>;
pub type RangeFn = Arc<dyn Fn(&Rational, &Rational) -> Result<CellRange> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// `f` is monotone on the closed interval `[from, to]`; `None` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneClaim {
    pub direction: Direction,
    pub from: Option<Rational>,
    pub to: Option<Rational>,
}

impl MonotoneClaim {
    pub fn covers(&self, a: &Rational, b: &Rational) -> bool {
        self.from.as_ref().is_none_or(|f| f <= a) && self.to.as_ref().is_none_or(|t| b <= t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

/// Bounds on `inf` and `sup` of `f` over a closed cell. When `exact` is set
/// they are the infimum and supremum themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRange {
    pub inf: Rational,
    pub sup: Rational,
    pub exact: bool,
}

impl CellRange {
    pub fn exact(inf: Rational, sup: Rational) -> Self {
        CellRange { inf, sup, exact: true }
    }

    pub fn outer(inf: Rational, sup: Rational) -> Self {
        CellRange { inf, sup, exact: false }
    }

    fn hull(self, other: CellRange) -> CellRange {
        CellRange { inf: min(self.inf, other.inf), sup: max(self.sup, other.sup), exact: self.exact && other.exact }
    }

    fn absorb(self, e: &Enclosure) -> CellRange {
        let exact = self.exact && e.is_point();
        CellRange { inf: min(self.inf, e.lo().clone()), sup: max(self.sup, e.hi().clone()), exact }
    }
}

/// `f` agrees with `func` on the open interval `(from, to)`, and `func` is
/// continuous on the closed one.
#[derive(Clone, Debug)]
pub struct Piece {
    pub from: Rational,
    pub to: Rational,
    pub func: FnDescriptor,
}

#[derive(Clone, Default)]
pub struct FnMeta {
    pub monotone: Vec<MonotoneClaim>,
    pub lipschitz: Option<Rational>,
    pub bound: Option<Rational>,
    pub smoothness: Option<Smoothness>,
    pub range: Option<RangeFn>,
    pub pieces: Vec<Piece>,
    pub derivative: Option<Arc<FnDescriptor>>,
    pub antiderivative: Option<Arc<FnDescriptor>>,
    pub derivative_lipschitz: Option<Rational>,
    pub polynomial: Option<Poly>,
    /// Point evaluation is faithful at rationals only.
    pub rational_points_only: bool,
}

impl fmt::Debug for FnMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnMeta")
            .field("monotone", &self.monotone)
            .field("lipschitz", &self.lipschitz)
            .field("bound", &self.bound)
            .field("smoothness", &self.smoothness)
            .field("range", &self.range.is_some())
            .field("pieces", &self.pieces.len())
            .field("derivative", &self.derivative.as_ref().map(|d| d.name.clone()))
            .field("antiderivative", &self.antiderivative.as_ref().map(|d| d.name.clone()))
            .field("polynomial", &self.polynomial)
            .finish()
    }
}

#[derive(Clone)]
pub struct FnDescriptor {
    name: String,
    eval: EvalFn,
    meta: FnMeta,
}

impl fmt::Debug for FnDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnDescriptor").field("name", &self.name).field("meta", &self.meta).finish()
    }
}

/// A metadata claim contradicted by sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimViolation {
    pub claim: String,
    pub x: Rational,
    pub y: Option<Rational>,
}

impl FnDescriptor {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Rational) -> Result<Enclosure> + Send + Sync + 'static,
    {
        FnDescriptor { name: name.into(), eval: Arc::new(eval), meta: FnMeta::default() }
    }

    /// A rational-valued function.
    pub fn exact<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Rational) -> Result<Rational> + Send + Sync + 'static,
    {
        Self::new(name, move |x| f(x).map(Enclosure::point))
    }

    /// Polynomial with exact range, derivative and antiderivative metadata.
    pub fn polynomial(p: Poly) -> Self {
        Self::polynomial_named(p.to_string(), p)
    }

    pub fn polynomial_named(name: impl Into<String>, p: Poly) -> Self {
        let q = p.clone();
        let mut d = Self::exact(name, move |x| Ok(q.eval(x)));
        d.meta.polynomial = Some(p);
        d.meta.smoothness = Some(Smoothness::Infinite);
        d
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial_named(rational::exact_string(&c), Poly::constant(c))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn meta(&self) -> &FnMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut FnMeta {
        &mut self.meta
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_monotone(mut self, direction: Direction, from: Option<Rational>, to: Option<Rational>) -> Self {
        self.meta.monotone.push(MonotoneClaim { direction, from, to });
        self
    }

    pub fn with_lipschitz(mut self, c: Rational) -> Self {
        self.meta.lipschitz = Some(c);
        self
    }

    pub fn with_bound(mut self, m: Rational) -> Self {
        self.meta.bound = Some(m);
        self
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.meta.smoothness = Some(s);
        self
    }

    pub fn with_range<F>(mut self, f: F) -> Self
    where
        F: Fn(&Rational, &Rational) -> Result<CellRange> + Send + Sync + 'static,
    {
        self.meta.range = Some(Arc::new(f));
        self
    }

    pub fn with_pieces(mut self, pieces: Vec<Piece>) -> Self {
        self.meta.pieces = pieces;
        self
    }

    pub fn with_derivative(mut self, d: FnDescriptor) -> Self {
        self.meta.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_antiderivative(mut self, a: FnDescriptor) -> Self {
        self.meta.antiderivative = Some(Arc::new(a));
        self
    }

    pub fn with_derivative_lipschitz(mut self, c: Rational) -> Self {
        self.meta.derivative_lipschitz = Some(c);
        self
    }

    pub fn rational_points_only(mut self) -> Self {
        self.meta.rational_points_only = true;
        self
    }

    pub fn eval(&self, x: &Rational) -> Result<Enclosure> {
        (self.eval)(x)
    }

    /// Fails with [`Error::NotExact`] unless the oracle returns a point.
    pub fn eval_exact(&self, x: &Rational) -> Result<Rational> {
        let e = self.eval(x)?;
        match e.as_point() {
            Some(v) => Ok(v.clone()),
            None => Err(Error::NotExact { at: x.to_string() }),
        }
    }

    /// Derivative descriptor, synthesized for polynomials.
    pub fn derivative(&self) -> Option<FnDescriptor> {
        if let Some(d) = &self.meta.derivative {
            return Some((**d).clone());
        }
        self.meta.polynomial.as_ref().map(|p| FnDescriptor::polynomial(p.derivative()))
    }

    /// Antiderivative descriptor, synthesized for polynomials.
    pub fn antiderivative(&self) -> Option<FnDescriptor> {
        if let Some(a) = &self.meta.antiderivative {
            return Some((**a).clone());
        }
        self.meta.polynomial.as_ref().map(|p| FnDescriptor::polynomial(p.antiderivative()))
    }

    /// Breakpoints of the piecewise definition, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.meta.pieces.iter().flat_map(|p| [p.from.clone(), p.to.clone()]).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// The piece whose closed interval contains `[a, b]`.
    pub fn piece_covering(&self, a: &Rational, b: &Rational) -> Option<&Piece> {
        self.meta.pieces.iter().find(|p| &p.from <= a && b <= &p.to)
    }

    /// Bounds on `inf f` and `sup f` over `[a, b]` derived from metadata only.
    ///
    /// Sources, in order: piecewise definition, range oracle, polynomial
    /// structure, monotone claims, Lipschitz constant, global bound.
    pub fn range_on(&self, a: &Rational, b: &Rational) -> Result<CellRange> {
        if a > b {
            return Err(Error::InvertedEnclosure);
        }
        if !self.meta.pieces.is_empty() {
            if let Some(r) = self.range_from_pieces(a, b)? {
                return Ok(r);
            }
        }
        if let Some(range) = &self.meta.range {
            return range(a, b);
        }
        if let Some(p) = &self.meta.polynomial {
            return Ok(poly_range(p, a, b));
        }
        if let Some(r) = self.range_from_monotone(a, b)? {
            return Ok(r);
        }
        if let Some(c) = &self.meta.lipschitz {
            let mid = (a + b) / int(2);
            let fm = self.eval(&mid)?;
            let slack = c.abs() * (b - a) / int(2);
            return Ok(CellRange::outer(fm.lo() - &slack, fm.hi() + &slack));
        }
        if let Some(m) = &self.meta.bound {
            return Ok(CellRange::outer(-m.abs(), m.abs()));
        }
        Err(Error::MissingMetadata(format!("{}: no monotone, Lipschitz, bound, range or piecewise claim", self.name)))
    }

    fn range_from_pieces(&self, a: &Rational, b: &Rational) -> Result<Option<CellRange>> {
        let mut acc: Option<CellRange> = None;
        let mut covered = Vec::new();
        for p in &self.meta.pieces {
            if p.from < *b && p.to > *a {
                let lo = max(&p.from, a);
                let hi = min(&p.to, b);
                let r = p.func.range_on(lo, hi)?;
                acc = Some(match acc {
                    Some(prev) => prev.hull(r),
                    None => r,
                });
                covered.push((lo.clone(), hi.clone()));
            }
        }
        let Some(mut acc) = acc else {
            return Ok(None);
        };
        covered.sort();
        let mut reach = a.clone();
        for (lo, hi) in &covered {
            if *lo > reach {
                return Ok(None);
            }
            if *hi > reach {
                reach = hi.clone();
            }
        }
        if reach < *b {
            return Ok(None);
        }
        let mut probes = alloc::vec![a.clone(), b.clone()];
        probes.extend(self.breakpoints().into_iter().filter(|t| a < t && t < b));
        for t in probes {
            acc = acc.absorb(&self.eval(&t)?);
        }
        Ok(Some(acc))
    }

    fn range_from_monotone(&self, a: &Rational, b: &Rational) -> Result<Option<CellRange>> {
        if self.meta.monotone.is_empty() {
            return Ok(None);
        }
        let mut cuts: Vec<Rational> = self.meta.monotone.iter().flat_map(|c| [c.from.clone(), c.to.clone()]).flatten().filter(|t| a < t && t < b).collect();
        cuts.push(a.clone());
        cuts.push(b.clone());
        cuts.sort();
        cuts.dedup();
        let mut acc: Option<CellRange> = None;
        for w in cuts.windows(2) {
            let Some(claim) = self.meta.monotone.iter().find(|c| c.covers(&w[0], &w[1])) else {
                return Ok(None);
            };
            let fa = self.eval(&w[0])?;
            let fb = self.eval(&w[1])?;
            let (low, high) = match claim.direction {
                Direction::Increasing => (&fa, &fb),
                Direction::Decreasing => (&fb, &fa),
            };
            let r = CellRange { inf: low.lo().clone(), sup: high.hi().clone(), exact: low.is_point() && high.is_point() };
            acc = Some(match acc {
                Some(prev) => prev.hull(r),
                None => r,
            });
        }
        Ok(acc)
    }

    /// Spot-checks monotone, Lipschitz and bound claims on `samples` seeded
    /// random rationals in `[a, b]`. Only definite contradictions are listed.
    pub fn audit_claims(&self, a: &Rational, b: &Rational, samples: usize, seed: u64) -> Result<Vec<ClaimViolation>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let den: u64 = 1 << 20;
        let width = b - a;
        let mut xs: Vec<Rational> = (0..samples).map(|_| a + &width * Rational::new(rng.gen_range(0..=den).into(), den.into())).collect();
        xs.sort();
        xs.dedup();
        let values: Vec<Enclosure> = xs.iter().map(|x| self.eval(x)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for i in 0..xs.len() {
            if let Some(m) = &self.meta.bound {
                if values[i].lo() > m || values[i].hi() < &-m {
                    out.push(ClaimViolation { claim: format!("|f| <= {m}"), x: xs[i].clone(), y: None });
                }
            }
            if i + 1 == xs.len() {
                continue;
            }
            let (x, y) = (&xs[i], &xs[i + 1]);
            let (fx, fy) = (&values[i], &values[i + 1]);
            for claim in self.meta.monotone.iter().filter(|c| c.covers(x, y)) {
                let broken = match claim.direction {
                    Direction::Increasing => fx.lo() > fy.hi(),
                    Direction::Decreasing => fx.hi() < fy.lo(),
                };
                if broken {
                    out.push(ClaimViolation { claim: format!("{:?}", claim.direction).to_lowercase(), x: x.clone(), y: Some(y.clone()) });
                }
            }
            if let Some(c) = &self.meta.lipschitz {
                let diff = (fy - fx).abs();
                if diff.lo() > &(c * (y - x)) {
                    out.push(ClaimViolation { claim: format!("lipschitz {c}"), x: x.clone(), y: Some(y.clone()) });
                }
            }
        }
        Ok(out)
    }
}

/// Range of a polynomial over `[a, b]`.
pub fn poly_range(p: &Poly, a: &Rational, b: &Rational) -> CellRange {
    let (pa, pb) = (p.eval(a), p.eval(b));
    let endpoints = CellRange::exact(min(&pa, &pb).clone(), max(&pa, &pb).clone());
    if a == b {
        return endpoints;
    }
    let dp = p.derivative();
    let cell = Enclosure::spanning(a.clone(), b.clone());
    let slope = dp.eval_enclosure(&cell);
    if slope.is_nonneg() || !slope.hi().is_positive() {
        return endpoints;
    }
    if p.degree().is_some_and(|d| d <= 2) {
        // dp is linear with a root strictly inside (a, b)
        let turn = -dp.coeff(0) / dp.coeff(1);
        let v = p.eval(&turn);
        return CellRange::exact(min(endpoints.inf, v.clone()), max(endpoints.sup, v));
    }
    if let Some(roots) = dp.rational_roots() {
        let inner: Vec<Rational> = roots.into_iter().filter(|t| a < t && t < b).collect();
        if !inner.is_empty() {
            let mut pts = alloc::vec![a.clone()];
            pts.extend(inner);
            pts.push(b.clone());
            return pts.windows(2).map(|w| poly_range(p, &w[0], &w[1])).reduce(CellRange::hull).unwrap_or(endpoints);
        }
    }
    let mid = (a + b) / int(2);
    let half = (b - a) / int(2);
    let center = p.eval(&mid);
    let slack = slope.mag() * half;
    CellRange::outer(&center - &slack, &center + &slack)
}
