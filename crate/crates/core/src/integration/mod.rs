//! Partitions, Darboux and Riemann sums, certified integral enclosures.

pub mod gamma;
pub mod identities;
pub mod improper;

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::poly::Poly;
use crate::rational::{self, int, Rational};

/// `a = x₀ < x₁ < … < x_k = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Rational>,
}

impl Partition {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("a partition needs at least two points".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("partition points must increase strictly".into()));
        }
        Ok(Partition { points })
    }

    pub fn regular(a: &Rational, b: &Rational, k: u64) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let h = (b - a) / int(k as i64);
        let points = (0..=k).map(|i| if i == k { b.clone() } else { a + &h * int(i as i64) }).collect();
        Ok(Partition { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn a(&self) -> &Rational {
        &self.points[0]
    }

    pub fn b(&self) -> &Rational {
        &self.points[self.points.len() - 1]
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    /// Length of the largest cell.
    pub fn gap(&self) -> Rational {
        self.points.windows(2).map(|w| &w[1] - &w[0]).max().unwrap_or_default()
    }

    /// Union with extra points inside `(a, b)`.
    pub fn refine(&self, extra: &[Rational]) -> Partition {
        let mut points = self.points.clone();
        points.extend(extra.iter().filter(|x| *x > self.a() && *x < self.b()).cloned());
        points.sort();
        points.dedup();
        Partition { points }
    }

    pub fn is_refinement_of(&self, coarse: &Partition) -> bool {
        self.a() == coarse.a() && self.b() == coarse.b() && coarse.points.iter().all(|p| self.points.binary_search(p).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxPair {
    pub lower: Rational,
    pub upper: Rational,
    /// `(mᵢ, Mᵢ)` per cell.
    pub cells: Vec<(Rational, Rational)>,
    /// Unset when some cell bound is only an outer bound.
    pub exact: bool,
}

impl DarbouxPair {
    pub fn gap(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn enclosure(&self) -> Result<Enclosure> {
        Enclosure::new(self.lower.clone(), self.upper.clone())
    }
}

/// `L(f, P)` and `U(f, P)` from metadata-driven cell ranges.
pub fn darboux(f: &FnDescriptor, p: &Partition) -> Result<DarbouxPair> {
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    let mut cells = Vec::with_capacity(p.cells());
    let mut exact = true;
    for w in p.points.windows(2) {
        let r = f.range_on(&w[0], &w[1])?;
        let dx = &w[1] - &w[0];
        lower += &r.inf * &dx;
        upper += &r.sup * &dx;
        exact &= r.exact;
        cells.push((r.inf, r.sup));
    }
    Ok(DarbouxPair { lower, upper, cells, exact })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pick {
    Left,
    Right,
    Midpoint,
    Custom(Vec<Rational>),
}

/// `Σ f(ξᵢ)(xᵢ − xᵢ₋₁)` with exact evaluation.
pub fn riemann_sum(f: &FnDescriptor, p: &Partition, pick: &Pick) -> Result<Rational> {
    if let Pick::Custom(xs) = pick {
        if xs.len() != p.cells() {
            return Err(Error::InvalidParameter(format!("{} pick points for {} cells", xs.len(), p.cells())));
        }
    }
    let mut sum = Rational::zero();
    for (i, w) in p.points.windows(2).enumerate() {
        let xi = match pick {
            Pick::Left => w[0].clone(),
            Pick::Right => w[1].clone(),
            Pick::Midpoint => (&w[0] + &w[1]) / int(2),
            Pick::Custom(xs) => {
                let x = xs[i].clone();
                if x < w[0] || x > w[1] {
                    return Err(Error::PickOutsideCell { point: x.to_string(), lo: w[0].to_string(), hi: w[1].to_string() });
                }
                x
            }
        };
        sum += f.eval_exact(&xi)? * (&w[1] - &w[0]);
    }
    Ok(sum)
}

/// `Σ_{i<k} g(i)` for a polynomial `g`, through forward differences:
/// `Σ_{i<k} C(i, j) = C(k, j+1)`.
fn poly_index_sum(g: &Poly, k: u64) -> Rational {
    let d = g.degree().unwrap_or(0);
    let mut diffs: Vec<Rational> = (0..=d).map(|i| g.eval(&int(i as i64))).collect();
    let mut total = Rational::zero();
    for j in 0..=d {
        total += &diffs[0] * Rational::from_integer(rational::binomial(k, j as u64 + 1));
        for i in 0..diffs.len() - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
    }
    total
}

/// Darboux pair of a polynomial that is monotone on `[a, b]`, for the
/// regular partition with `k` cells, in closed form.
pub fn poly_darboux_regular(p: &Poly, a: &Rational, b: &Rational, k: u64) -> Result<(Rational, Rational)> {
    if a >= b || k == 0 {
        return Err(Error::InvalidParameter("need a < b and k ≥ 1".into()));
    }
    let slope = p.derivative().eval_enclosure(&Enclosure::spanning(a.clone(), b.clone()));
    let increasing = slope.is_nonneg();
    if !increasing && slope.hi().is_positive() {
        return Err(Error::InvalidParameter(format!("{p} is not certified monotone on [{a}, {b}]")));
    }
    let h = (b - a) / int(k as i64);
    let left = poly_index_sum(&p.compose_affine(&h, a), k) * &h;
    let right = &left + &h * (p.eval(b) - p.eval(a));
    Ok(if increasing { (left, right) } else { (right, left) })
}

/// Result of the Archimedes–Riemann driver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralEnclosure {
    pub enclosure: Enclosure,
    /// Total number of cells over all segments.
    pub cells: u64,
    /// Whether the requested width was reached.
    pub met: bool,
    /// Every cell bound was exact.
    pub exact: bool,
}

/// Cells per segment for generic (non-polynomial) integrands.
pub const CELL_CAP: u64 = 1 << 13;

/// Doubles `k` on regular partitions of each monotone segment until
/// `U − L ≤ width`. Segments are cut at piece breakpoints, monotone-claim
/// boundaries and rational critical points of polynomials.
pub fn integrate_enclosure(f: &FnDescriptor, a: &Rational, b: &Rational, width: &Rational) -> Result<IntegralEnclosure> {
    if a >= b {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    if !width.is_positive() {
        return Err(Error::InvalidParameter("target width must be positive".into()));
    }
    let cuts = segment_cuts(f, a, b);
    let total = b - a;
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    let mut cells = 0;
    let mut met = true;
    let mut exact = true;
    for w in cuts.windows(2) {
        let budget = width * (&w[1] - &w[0]) / &total;
        let seg = integrate_segment(f, &w[0], &w[1], &budget)?;
        lo += seg.enclosure.lo();
        hi += seg.enclosure.hi();
        cells += seg.cells;
        met &= seg.met;
        exact &= seg.exact;
    }
    Ok(IntegralEnclosure { enclosure: Enclosure::new(lo, hi)?, cells, met, exact })
}

fn segment_cuts(f: &FnDescriptor, a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut cuts = alloc::vec![a.clone(), b.clone()];
    cuts.extend(f.breakpoints());
    for c in &f.meta().monotone {
        cuts.extend(c.from.iter().cloned());
        cuts.extend(c.to.iter().cloned());
    }
    if let Some(p) = &f.meta().polynomial {
        if let Some(roots) = p.derivative().rational_roots() {
            cuts.extend(roots);
        }
    }
    cuts.retain(|t| a <= t && t <= b);
    cuts.sort();
    cuts.dedup();
    cuts
}

fn integrate_segment(f: &FnDescriptor, a: &Rational, b: &Rational, budget: &Rational) -> Result<IntegralEnclosure> {
    if let Some(piece) = f.piece_covering(a, b) {
        return integrate_enclosure(&piece.func, a, b, budget);
    }
    if let Some(p) = &f.meta().polynomial {
        if let Some(r) = poly_segment(p, a, b, budget)? {
            return Ok(r);
        }
    }
    let mut k = 1;
    loop {
        let pair = darboux(f, &Partition::regular(a, b, k)?)?;
        if pair.gap() <= *budget || k >= CELL_CAP {
            return Ok(IntegralEnclosure { met: pair.gap() <= *budget, exact: pair.exact, cells: k, enclosure: pair.enclosure()? });
        }
        k *= 2;
    }
}

/// Closed-form route; `None` when the polynomial is not certified monotone.
fn poly_segment(p: &Poly, a: &Rational, b: &Rational, budget: &Rational) -> Result<Option<IntegralEnclosure>> {
    let slope = p.derivative().eval_enclosure(&Enclosure::spanning(a.clone(), b.clone()));
    if !slope.is_nonneg() && slope.hi().is_positive() {
        return Ok(None);
    }
    // U − L = (b − a)|p(b) − p(a)|/k, so the doubling schedule stops at the
    // first power of two reaching the budget
    let spread = (p.eval(b) - p.eval(a)).abs() * (b - a);
    let need = if spread.is_zero() { BigInt::one() } else { rational::ceil(&(spread / budget)) };
    let mut k: u64 = 1;
    while BigInt::from(k) < need {
        k = k.checked_mul(2).ok_or_else(|| Error::InvalidParameter("target width too small".into()))?;
    }
    let (lo, hi) = poly_darboux_regular(p, a, b, k)?;
    Ok(Some(IntegralEnclosure { enclosure: Enclosure::new(lo, hi)?, cells: k, met: true, exact: true }))
}

/// Exact `U − L` on a regular partition of a monotone segment: `(b−a)|f(b)−f(a)|/k`.
pub fn monotone_gap(f: &FnDescriptor, a: &Rational, b: &Rational, k: u64) -> Result<Rational> {
    let (fa, fb) = (f.eval_exact(a)?, f.eval_exact(b)?);
    Ok((b - a) * (fb - fa).abs() / int(k as i64))
}

#[cfg(test)]
mod tests;
