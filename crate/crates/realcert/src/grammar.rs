//! The mini expression grammar: named families and rational polynomials.
//!
//! ```text
//! fn     := "poly:" poly | "gallery:" name | "improper:x^-" rational
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := coef ["*"] ["x" ["^" uint]] | "x" ["^" uint]
//! coef   := digits ["." digits] ["/" digits]
//! ```

use std::fmt;

use realcert_core::approx::GalleryName;
use realcert_core::rational::{self, Rational};
use realcert_core::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {} of {:?}: {}", self.position, self.input, self.message)
    }
}

impl std::error::Error for ParseError {}

fn fail(input: &str, position: usize, message: impl Into<String>) -> ParseError {
    ParseError { input: input.to_string(), position, message: message.into() }
}

#[derive(Debug, Clone)]
pub enum FnSpec {
    Poly(Poly),
    Gallery(GalleryName),
    /// `x^{−p}`.
    InversePower(Rational),
}

pub fn parse_fn(input: &str) -> Result<FnSpec, ParseError> {
    let Some((family, body)) = input.split_once(':') else {
        return Err(fail(input, 0, "expected poly:, gallery: or improper:"));
    };
    let offset = family.len() + 1;
    match family {
        "poly" => parse_poly(body).map(FnSpec::Poly).map_err(|e| fail(input, e.position + offset, e.message)),
        "gallery" => GalleryName::parse(body).map(FnSpec::Gallery).map_err(|_| fail(input, offset, format!("unknown gallery function {body:?}"))),
        "improper" => {
            let Some(p) = body.strip_prefix("x^-") else {
                return Err(fail(input, offset, "improper integrands have the form x^-p"));
            };
            let p = rational::parse_rational(p).map_err(|_| fail(input, offset + 3, "exponent must be a rational number"))?;
            if p <= Rational::from_integer(0.into()) {
                return Err(fail(input, offset + 3, "exponent must be positive"));
            }
            Ok(FnSpec::InversePower(p))
        }
        other => Err(fail(input, 0, format!("unknown function family {other:?}"))),
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or_default()
    }
}

/// Highest accepted exponent.
const MAX_DEGREE: usize = 256;

pub fn parse_poly(input: &str) -> Result<Poly, ParseError> {
    let mut c = Cursor { s: input.as_bytes(), pos: 0 };
    let mut coeffs: Vec<Rational> = Vec::new();
    if c.peek().is_none() {
        return Err(fail(input, 0, "empty polynomial"));
    }
    let mut first = true;
    loop {
        let negative = if c.eat(b'-') {
            true
        } else if c.eat(b'+') || first {
            false
        } else {
            break;
        };
        first = false;
        let (coef, degree) = term(input, &mut c)?;
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, Rational::default());
        }
        coeffs[degree] += if negative { -coef } else { coef };
    }
    if c.peek().is_some() {
        return Err(fail(input, c.pos, "unexpected character"));
    }
    Ok(Poly::new(coeffs))
}

fn term(input: &str, c: &mut Cursor<'_>) -> Result<(Rational, usize), ParseError> {
    let start = {
        c.skip_ws();
        c.pos
    };
    let coef = match c.peek() {
        Some(d) if d.is_ascii_digit() || d == b'.' => {
            let whole = c.digits().to_string();
            let mut text = whole;
            if c.s.get(c.pos) == Some(&b'.') {
                c.pos += 1;
                let frac = c.digits();
                if frac.is_empty() {
                    return Err(fail(input, c.pos, "expected digits after '.'"));
                }
                text = format!("{text}.{frac}");
            }
            if c.s.get(c.pos) == Some(&b'/') {
                c.pos += 1;
                let den = c.digits();
                if den.is_empty() {
                    return Err(fail(input, c.pos, "expected a denominator"));
                }
                text = format!("{text}/{den}");
            }
            let value = rational::parse_rational(&text).map_err(|e| fail(input, start, e.to_string()))?;
            c.eat(b'*');
            Some(value)
        }
        _ => None,
    };
    if !c.eat(b'x') {
        return match coef {
            Some(v) => Ok((v, 0)),
            None => Err(fail(input, c.pos, "expected a coefficient or x")),
        };
    }
    let mut degree = 1;
    if c.eat(b'^') {
        c.skip_ws();
        let at = c.pos;
        let d = c.digits();
        degree = d.parse().map_err(|_| fail(input, at, "expected a nonnegative integer exponent"))?;
        if degree > MAX_DEGREE {
            return Err(fail(input, at, format!("degree exceeds {MAX_DEGREE}")));
        }
    }
    Ok((coef.unwrap_or_else(|| Rational::from_integer(1.into())), degree))
}

/// A rational endpoint or `inf` / `-inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Finite(Rational),
    PosInf,
    NegInf,
}

pub fn parse_bound(s: &str) -> Result<Bound, ParseError> {
    match s.trim() {
        "inf" | "+inf" => Ok(Bound::PosInf),
        "-inf" => Ok(Bound::NegInf),
        t => parse_number(t).map(Bound::Finite),
    }
}

pub fn parse_number(s: &str) -> Result<Rational, ParseError> {
    rational::parse_rational(s).map_err(|e| match e {
        realcert_core::Error::Parse { position, .. } => fail(s, position, "not a rational number"),
        other => fail(s, 0, other.to_string()),
    })
}

/// `p,q` with both parts positive integers.
pub fn parse_pattern(s: &str) -> Result<(usize, usize), ParseError> {
    let Some((p, q)) = s.split_once(',') else {
        return Err(fail(s, 0, "expected p,q"));
    };
    let p: usize = p.trim().parse().map_err(|_| fail(s, 0, "expected a positive integer"))?;
    let q: usize = q.trim().parse().map_err(|_| fail(s, s.find(',').unwrap_or(0) + 1, "expected a positive integer"))?;
    if p == 0 || q == 0 {
        return Err(fail(s, 0, "pattern entries must be positive"));
    }
    Ok((p, q))
}
