//! Bisection root brackets and mean-value witnesses.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::{Direction, FnDescriptor};
use num_traits::Signed;

use crate::rational::{int, Rational};

/// `[a, b]` on which `f` changes sign (or vanishes at an endpoint).
#[derive(Clone, Debug)]
pub struct Bracket {
    a: Rational,
    b: Rational,
    f: FnDescriptor,
}

impl Bracket {
    pub fn new(f: FnDescriptor, a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidParameter(format!("empty bracket [{a}, {b}]")));
        }
        let (sa, sb) = (decided_sign(&f, &a)?, decided_sign(&f, &b)?);
        if sa == sb && sa != Ordering::Equal {
            return Err(Error::NoSignChange { lo: a.to_string(), hi: b.to_string() });
        }
        Ok(Bracket { a, b, f })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }
}

fn decided_sign(f: &FnDescriptor, x: &Rational) -> Result<Ordering> {
    f.eval(x)?.sign().ok_or_else(|| Error::NotExact { at: x.to_string() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectReport {
    pub enclosure: Enclosure,
    pub iterations: u32,
    /// Steps where the midpoint sign was ambiguous and a nearby split point was used.
    pub perturbed: u32,
    /// A split point hit the root exactly.
    pub exact_root: bool,
}

/// Sign of `h` at a split point near the midpoint of `[a, b]`.
fn split(h: &dyn Fn(&Rational) -> Result<Enclosure>, a: &Rational, b: &Rational) -> Result<(Rational, Ordering, bool)> {
    let m = (a + b) / int(2);
    if let Some(s) = h(&m)?.sign() {
        return Ok((m, s, false));
    }
    let step = (b - a) / int(16);
    for j in [1i64, -1, 2, -2, 3, -3] {
        let t = &m + &step * int(j);
        if let Some(s) = h(&t)?.sign() {
            return Ok((t, s, true));
        }
    }
    Err(Error::NotExact { at: m.to_string() })
}

/// Runs at most `iterations` halvings, stopping early once the width is at most `tol`.
fn bisect_with(h: &dyn Fn(&Rational) -> Result<Enclosure>, a: &Rational, b: &Rational, iterations: u32, tol: Option<&Rational>) -> Result<BisectReport> {
    let sa = h(a)?.sign().ok_or_else(|| Error::NotExact { at: a.to_string() })?;
    let sb = h(b)?.sign().ok_or_else(|| Error::NotExact { at: b.to_string() })?;
    let point = |x: &Rational, iterations| BisectReport { enclosure: Enclosure::point(x.clone()), iterations, perturbed: 0, exact_root: true };
    if sa == Ordering::Equal {
        return Ok(point(a, 0));
    }
    if sb == Ordering::Equal {
        return Ok(point(b, 0));
    }
    if sa == sb {
        return Err(Error::NoSignChange { lo: a.to_string(), hi: b.to_string() });
    }
    let (mut lo, mut hi) = (a.clone(), b.clone());
    let mut perturbed = 0;
    for i in 0..iterations {
        if tol.is_some_and(|t| &hi - &lo <= *t) {
            return Ok(BisectReport { enclosure: Enclosure::new(lo, hi)?, iterations: i, perturbed, exact_root: false });
        }
        let (m, s, moved) = split(h, &lo, &hi)?;
        perturbed += u32::from(moved);
        if s == Ordering::Equal {
            return Ok(BisectReport { perturbed, ..point(&m, i + 1) });
        }
        if s == sa {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(BisectReport { enclosure: Enclosure::new(lo, hi)?, iterations, perturbed, exact_root: false })
}

/// Halves the bracket `iterations` times, keeping the sign change inside.
pub fn bisect(br: &Bracket, iterations: u32) -> Result<BisectReport> {
    bisect_with(&|x| br.f.eval(x), &br.a, &br.b, iterations, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceRoot {
    pub from: Rational,
    pub to: Rational,
    pub direction: Direction,
    pub root: Option<Enclosure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCountReport {
    pub pieces: Vec<PieceRoot>,
    pub count: usize,
}

/// Counts roots of `f` on `[a, b]` from its monotone claims: each monotone
/// piece holds at most one root, located by bisection. Claims on
/// polynomials are checked against the derivative.
pub fn count_roots_report(f: &FnDescriptor, a: &Rational, b: &Rational, iterations: u32) -> Result<RootCountReport> {
    if a >= b {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let mut cuts = alloc::vec![a.clone(), b.clone()];
    for c in &f.meta().monotone {
        cuts.extend(c.from.iter().chain(c.to.iter()).filter(|t| a < *t && *t < b).cloned());
    }
    cuts.sort();
    cuts.dedup();
    let mut pieces = Vec::new();
    let mut count = 0;
    let mut last_root: Option<Rational> = None;
    for w in cuts.windows(2) {
        let claim = f
            .meta()
            .monotone
            .iter()
            .find(|c| c.covers(&w[0], &w[1]))
            .ok_or_else(|| Error::MissingMetadata(format!("no monotone claim covers [{}, {}]", w[0], w[1])))?;
        if let Some(p) = &f.meta().polynomial {
            let slope = p.derivative().eval_enclosure(&Enclosure::spanning(w[0].clone(), w[1].clone()));
            let ok = match claim.direction {
                Direction::Increasing => slope.is_nonneg(),
                Direction::Decreasing => !slope.hi().is_positive(),
            };
            if !ok {
                return Err(Error::ClaimViolated { index: 0, what: format!("monotone on [{}, {}]", w[0], w[1]) });
            }
        }
        let root = match bisect_with(&|x| f.eval(x), &w[0], &w[1], iterations, None) {
            Ok(r) => Some(r.enclosure),
            Err(Error::NoSignChange { .. }) => None,
            Err(e) => return Err(e),
        };
        // a root sitting on a shared cut is counted once
        let duplicate = match (&root, &last_root) {
            (Some(r), Some(prev)) => r.as_point() == Some(prev),
            _ => false,
        };
        last_root = root.as_ref().and_then(|r| r.as_point().filter(|x| **x == w[1]).cloned());
        if root.is_some() && !duplicate {
            count += 1;
        }
        pieces.push(PieceRoot { from: w[0].clone(), to: w[1].clone(), direction: claim.direction, root: if duplicate { None } else { root } });
    }
    Ok(RootCountReport { pieces, count })
}

/// Bisection inside a caller bracket that must lie within one monotone piece.
pub fn root_in_piece(f: &FnDescriptor, a: &Rational, b: &Rational, iterations: u32) -> Result<BisectReport> {
    let inside = f.meta().monotone.iter().any(|c| c.covers(a, b));
    if !inside {
        return Err(Error::SpansPieces { lo: a.to_string(), hi: b.to_string() });
    }
    bisect_with(&|x| f.eval(x), a, b, iterations, None)
}

#[derive(Clone, Debug)]
pub enum MvtKind {
    Lagrange,
    /// Cauchy's form against `g`.
    Cauchy(FnDescriptor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvtReport {
    /// `(f(b) − f(a))/(b − a)`, or `(f(b) − f(a))/(g(b) − g(a))` for Cauchy.
    pub slope: Rational,
    /// `None` when the scan grid shows no sign change.
    pub witness: Option<Enclosure>,
    pub note: String,
}

/// Grid cells scanned for a sign change of the witness function.
pub const MVT_GRID: i64 = 64;

/// Locates `c ∈ (a, b)` with `f′(c) = (f(b) − f(a))/(b − a)`, or the Cauchy
/// form `(f(b) − f(a))g′(c) = (g(b) − g(a))f′(c)`, to width `tol`.
pub fn mvt_witness(f: &FnDescriptor, a: &Rational, b: &Rational, kind: &MvtKind, tol: &Rational) -> Result<MvtReport> {
    if a >= b {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let df = f.derivative().ok_or_else(|| Error::MissingMetadata(format!("{}: no derivative", f.name())))?;
    let df_rise = f.eval_exact(b)? - f.eval_exact(a)?;
    let (h, slope): (alloc::boxed::Box<dyn Fn(&Rational) -> Result<Enclosure>>, Rational) = match kind {
        MvtKind::Lagrange => {
            let m = &df_rise / (b - a);
            let mm = m.clone();
            (alloc::boxed::Box::new(move |x: &Rational| Ok(df.eval(x)?.shift(&-&mm))), m)
        }
        MvtKind::Cauchy(g) => {
            let dg = g.derivative().ok_or_else(|| Error::MissingMetadata(format!("{}: no derivative", g.name())))?;
            let dg_rise = g.eval_exact(b)? - g.eval_exact(a)?;
            if dg_rise == int(0) {
                return Err(Error::DivisionByZero);
            }
            let slope = &df_rise / &dg_rise;
            let (fr, gr) = (df_rise.clone(), dg_rise);
            (alloc::boxed::Box::new(move |x: &Rational| Ok(&dg.eval(x)?.scale(&fr) - &df.eval(x)?.scale(&gr))), slope)
        }
    };
    let step = (b - a) / int(MVT_GRID);
    let grid: Vec<Rational> = (1..MVT_GRID).map(|k| a + &step * int(k)).collect();
    let mut prev: Option<(Rational, Ordering)> = None;
    for x in &grid {
        let Some(s) = h(x)?.sign() else {
            prev = None;
            continue;
        };
        if s == Ordering::Equal {
            return Ok(MvtReport { slope, witness: Some(Enclosure::point(x.clone())), note: String::from("grid point") });
        }
        if let Some((px, ps)) = &prev {
            if *ps != s {
                let r = bisect_with(&*h, px, x, u32::MAX, Some(tol))?;
                return Ok(MvtReport { slope, witness: Some(r.enclosure), note: format!("bisection, {} steps", r.iterations) });
            }
        }
        prev = Some((x.clone(), s));
    }
    Ok(MvtReport { slope, witness: None, note: format!("no sign change on a {MVT_GRID}-cell grid") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::rational::{self, rat};

    fn sextic() -> FnDescriptor {
        FnDescriptor::polynomial(Poly::from_ints(&[1, 6, 0, 0, 0, 0, 1])).with_monotone(Direction::Decreasing, None, Some(int(-1))).with_monotone(
            Direction::Increasing,
            Some(int(-1)),
            None,
        )
    }

    #[test]
    fn sextic_bracket() {
        let f = sextic();
        for n in [30u32, 40] {
            let r = bisect(&Bracket::new(f.clone(), int(-1), int(0)).unwrap(), n).unwrap();
            assert_eq!(r.enclosure.width(), Rational::new(1.into(), rational::pow2(n)));
            let (lo, hi) = (f.eval_exact(r.enclosure.lo()).unwrap(), f.eval_exact(r.enclosure.hi()).unwrap());
            assert!(lo.is_negative() && hi.is_positive());
        }
    }

    #[test]
    fn sqrt_two_and_odd_linear() {
        let f = FnDescriptor::polynomial(Poly::from_ints(&[-2, 0, 1]));
        let r = bisect(&Bracket::new(f, int(1), int(2)).unwrap(), 30).unwrap();
        assert!(r.enclosure.lo() * r.enclosure.lo() < int(2) && r.enclosure.hi() * r.enclosure.hi() > int(2));
        let id = FnDescriptor::polynomial(Poly::identity());
        let r = bisect(&Bracket::new(id, int(-1), int(1)).unwrap(), 10).unwrap();
        assert_eq!(r.enclosure, Enclosure::point(int(0)));
        assert!(r.exact_root);
    }

    #[test]
    fn bracket_needs_sign_change() {
        let f = FnDescriptor::polynomial(Poly::from_ints(&[1, 0, 1]));
        assert!(matches!(Bracket::new(f, int(-1), int(1)), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn root_counts() {
        let r = count_roots_report(&sextic(), &int(-2), &int(0), 30).unwrap();
        assert_eq!(r.count, 2);
        let quintic = FnDescriptor::polynomial(Poly::from_ints(&[32, 1, 0, 0, 0, 1])).with_monotone(Direction::Increasing, None, None);
        assert_eq!(count_roots_report(&quintic, &int(-3), &int(0), 20).unwrap().count, 1);
        let bowl = FnDescriptor::polynomial(Poly::from_ints(&[1, 0, 1])).with_monotone(Direction::Decreasing, None, Some(int(0))).with_monotone(
            Direction::Increasing,
            Some(int(0)),
            None,
        );
        assert_eq!(count_roots_report(&bowl, &int(-1), &int(1), 20).unwrap().count, 0);
        // root on the cut is counted once
        let v = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1])).with_monotone(Direction::Decreasing, None, Some(int(0))).with_monotone(
            Direction::Increasing,
            Some(int(0)),
            None,
        );
        assert_eq!(count_roots_report(&v, &int(-1), &int(1), 20).unwrap().count, 1);
    }

    #[test]
    fn wrong_claims_and_spanning_brackets() {
        let f = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1])).with_monotone(Direction::Increasing, None, None);
        assert!(matches!(count_roots_report(&f, &int(-1), &int(1), 10), Err(Error::ClaimViolated { .. })));
        assert!(matches!(root_in_piece(&sextic(), &int(-2), &int(0), 10), Err(Error::SpansPieces { .. })));
        assert!(root_in_piece(&sextic(), &int(-1), &int(0), 10).is_ok());
    }

    #[test]
    fn mean_value_witnesses() {
        let tol = rational::ten_pow_neg(8);
        let sq = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
        let cubic = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, -9, 1]));
        let r = mvt_witness(&sq, &int(1), &int(7), &MvtKind::Lagrange, &tol).unwrap();
        assert!(r.witness.unwrap().contains(&int(4)));
        let r = mvt_witness(&cubic, &int(1), &int(7), &MvtKind::Lagrange, &tol).unwrap();
        assert_eq!(r.slope, int(-15));
        let c = r.witness.unwrap();
        assert!(c.contains(&int(5)) && c.width() <= tol);
        let r = mvt_witness(&sq, &int(1), &int(7), &MvtKind::Cauchy(cubic), &tol).unwrap();
        assert!(r.witness.unwrap().contains(&rat(19, 4)));
    }

    #[test]
    fn straight_line_has_no_crossing() {
        let line = FnDescriptor::polynomial(Poly::from_ints(&[1, 2]));
        let r = mvt_witness(&line, &int(0), &int(1), &MvtKind::Lagrange, &rat(1, 100)).unwrap();
        assert!(r.witness.is_some());
        let cubic = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 0, 1]));
        let r = mvt_witness(&cubic, &int(-1), &int(1), &MvtKind::Lagrange, &rat(1, 1000)).unwrap();
        // c = ±1/√3; the scan meets the negative one first
        let c = r.witness.unwrap();
        assert!(c.hi().is_negative());
        assert!(c.hi() * c.hi() * int(3) < int(1) && c.lo() * c.lo() * int(3) > int(1));
    }
}
