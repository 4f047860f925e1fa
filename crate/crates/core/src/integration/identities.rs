//! Substitution and integration-by-parts identities as cross-checks.

use alloc::format;

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::FnDescriptor;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub left: Enclosure,
    pub right: Enclosure,
    /// The two enclosures overlap.
    pub agree: bool,
}

impl IdentityReport {
    fn new(left: Enclosure, right: Enclosure) -> Self {
        let agree = left.overlaps(&right);
        IdentityReport { left, right, agree }
    }
}

fn definite(f: &FnDescriptor, a: &Rational, b: &Rational) -> Result<Enclosure> {
    let anti = f.antiderivative().ok_or_else(|| Error::MissingMetadata(format!("{}: no registered antiderivative", f.name())))?;
    Ok(&anti.eval(b)? - &anti.eval(a)?)
}

/// `∫_a^b f(g(x))g'(x) dx` against `∫_{g(a)}^{g(b)} f(u) du`.
///
/// `composite` is the left integrand and `outer` is `f`; both need
/// registered antiderivatives, and `g` must be exact at `a` and `b`.
pub fn substitution_check(composite: &FnDescriptor, g: &FnDescriptor, outer: &FnDescriptor, a: &Rational, b: &Rational) -> Result<IdentityReport> {
    let left = definite(composite, a, b)?;
    let right = definite(outer, &g.eval_exact(a)?, &g.eval_exact(b)?)?;
    Ok(IdentityReport::new(left, right))
}

/// `∫_a^b u v' dx` against `[uv]_a^b − ∫_a^b v u' dx`.
pub fn parts_check(u: &FnDescriptor, v: &FnDescriptor, u_dv: &FnDescriptor, v_du: &FnDescriptor, a: &Rational, b: &Rational) -> Result<IdentityReport> {
    let left = definite(u_dv, a, b)?;
    let boundary = &(&u.eval(b)? * &v.eval(b)?) - &(&u.eval(a)? * &v.eval(a)?);
    let right = &boundary - &definite(v_du, a, b)?;
    Ok(IdentityReport::new(left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::integrate_enclosure;
    use crate::poly::Poly;
    use crate::powerseries::elementary;
    use crate::rational::{int, rat};

    const BITS: u32 = 96;

    #[test]
    fn x_sqrt_16_plus_x2() {
        // F(x) = (16 + x²)^{3/2} / 3
        let anti = FnDescriptor::new("(16+x^2)^(3/2)/3", |x| {
            let u = int(16) + x * x;
            Ok(elementary::sqrt(&u, BITS)?.scale(&(u / int(3))))
        });
        let composite = FnDescriptor::new("x*sqrt(16+x^2)", |x| Ok(elementary::sqrt(&(int(16) + x * x), BITS)?.scale(x))).with_antiderivative(anti);
        let outer_anti = FnDescriptor::new("u^(3/2)/3", |u| Ok(elementary::sqrt(u, BITS)?.scale(&(u / int(3)))));
        let outer = FnDescriptor::new("sqrt(u)/2", |u| Ok(elementary::sqrt(u, BITS)?.scale(&rat(1, 2)))).with_antiderivative(outer_anti);
        let g = FnDescriptor::polynomial(Poly::from_ints(&[16, 0, 1]));
        let r = substitution_check(&composite, &g, &outer, &int(-2), &int(3)).unwrap();
        assert!(r.agree);
        let closed = &Enclosure::point(rat(125, 3)) - &elementary::sqrt(&int(20), BITS).unwrap().scale(&rat(20, 3));
        assert!(r.left.overlaps(&closed));
        assert!(r.left.width() < crate::rational::ten_pow_neg(6));
    }

    #[test]
    fn parts_on_polynomials() {
        // u = x, v = x²: ∫ x·2x = [x³] − ∫ x²
        let u = FnDescriptor::polynomial(Poly::from_ints(&[0, 1]));
        let v = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
        let u_dv = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 2]));
        let v_du = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
        let r = parts_check(&u, &v, &u_dv, &v_du, &int(-1), &int(2)).unwrap();
        assert!(r.agree);
        assert_eq!(r.left, r.right);
    }

    #[test]
    fn symmetry_rules() {
        let odd = FnDescriptor::polynomial(Poly::from_ints(&[0, 3, 0, -1]));
        let e = integrate_enclosure(&odd, &int(-2), &int(2), &rat(1, 1000)).unwrap();
        assert!(e.enclosure.contains(&int(0)));
        let even = FnDescriptor::polynomial(Poly::from_ints(&[1, 0, 5, 0, 1]));
        let full = integrate_enclosure(&even, &int(-1), &int(1), &rat(1, 1000)).unwrap().enclosure;
        let half = integrate_enclosure(&even, &int(0), &int(1), &rat(1, 2000)).unwrap().enclosure;
        assert!(full.overlaps(&half.scale(&int(2))));
    }

    #[test]
    fn missing_antiderivative_is_reported() {
        let f = FnDescriptor::exact("1/x", crate::rational::recip);
        let g = FnDescriptor::polynomial(Poly::identity());
        assert!(matches!(substitution_check(&f, &g, &f, &int(1), &int(2)), Err(Error::MissingMetadata(_))));
    }
}
