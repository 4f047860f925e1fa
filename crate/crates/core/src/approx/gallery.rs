//! Named functions with the metadata the integration and approximation
//! kernels rely on.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;

use num_traits::{Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::function::{CellRange, Direction, FnDescriptor, Piece, Smoothness};
use crate::powerseries::elementary;
use crate::rational::{int, rat, Rational};

use super::sawtooth::SawtoothSeries;

const BITS: u32 = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalleryName {
    /// 1 on rationals, 0 on irrationals; evaluable at rationals only.
    Dirichlet,
    /// 1 for `x ≥ 0`, 0 for `x < 0`.
    Heaviside,
    /// `e^{−1/x²}`, with value 0 at 0.
    Bump,
    /// `g(x−a)/(g(x−a) + g(b−x))` with `g(t) = e^{−1/t}` for `t > 0`, else 0.
    SmoothStep { a: Rational, b: Rational },
    /// The nowhere-differentiable sawtooth sum truncated at `levels`.
    Sawtooth { levels: u32 },
    /// The five-piece step function on `[0, 5]`.
    Step5,
}

impl GalleryName {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "dirichlet" => GalleryName::Dirichlet,
            "heaviside" => GalleryName::Heaviside,
            "bump" => GalleryName::Bump,
            "smooth-step" => GalleryName::SmoothStep { a: int(0), b: int(1) },
            "sawtooth" => GalleryName::Sawtooth { levels: 24 },
            "step5" => GalleryName::Step5,
            other => return Err(Error::InvalidParameter(format!("unknown gallery function '{other}'"))),
        })
    }

    pub fn label(&self) -> String {
        match self {
            GalleryName::Dirichlet => "dirichlet".to_string(),
            GalleryName::Heaviside => "heaviside".to_string(),
            GalleryName::Bump => "bump".to_string(),
            GalleryName::SmoothStep { a, b } => format!("smooth-step[{a},{b}]"),
            GalleryName::Sawtooth { levels } => format!("sawtooth[{levels}]"),
            GalleryName::Step5 => "step5".to_string(),
        }
    }
}

pub fn gallery(name: &GalleryName) -> Result<FnDescriptor> {
    Ok(match name {
        GalleryName::Dirichlet => FnDescriptor::exact("dirichlet", |_| Ok(int(1)))
            .with_range(|a, b| Ok(if a == b { CellRange::exact(int(1), int(1)) } else { CellRange::exact(int(0), int(1)) }))
            .with_bound(int(1))
            .rational_points_only(),
        GalleryName::Heaviside => {
            let pieces = vec![
                Piece { from: int(-(1 << 40)), to: int(0), func: FnDescriptor::constant(int(0)) },
                Piece { from: int(0), to: int(1 << 40), func: FnDescriptor::constant(int(1)) },
            ];
            FnDescriptor::exact("heaviside", |x| Ok(if x.is_negative() { int(0) } else { int(1) }))
                .with_monotone(Direction::Increasing, None, None)
                .with_bound(int(1))
                .with_pieces(pieces)
        }
        GalleryName::Bump => FnDescriptor::new("bump", |x| {
            if x.is_zero() {
                return Ok(Enclosure::zero());
            }
            elementary::exp(&-(int(1) / (x * x)), BITS)
        })
        .with_smoothness(Smoothness::Infinite)
        .with_bound(int(1))
        .with_monotone(Direction::Decreasing, None, Some(int(0)))
        .with_monotone(Direction::Increasing, Some(int(0)), None),
        GalleryName::SmoothStep { a, b } => {
            if a >= b {
                return Err(Error::InvalidParameter(format!("smooth step needs a < b, got [{a}, {b}]")));
            }
            let (a, b) = (a.clone(), b.clone());
            FnDescriptor::new(name.label(), move |x| smooth_step(&a, &b, x)).with_smoothness(Smoothness::Infinite).with_bound(int(1)).with_monotone(
                Direction::Increasing,
                None,
                None,
            )
        }
        GalleryName::Sawtooth { levels } => {
            let ss = SawtoothSeries::new(*levels)?;
            FnDescriptor::new(name.label(), move |x| Ok(ss.eval(x))).with_range(|_, _| Ok(CellRange::outer(int(0), rat(4, 3)))).with_bound(rat(4, 3))
        }
        GalleryName::Step5 => step5(),
    })
}

fn smooth_step(a: &Rational, b: &Rational, x: &Rational) -> Result<Enclosure> {
    if x <= a {
        return Ok(Enclosure::zero());
    }
    if x >= b {
        return Ok(Enclosure::point(int(1)));
    }
    // h = 1/(1 + e^u) with u = 1/(x−a) − 1/(b−x)
    let u = int(1) / (x - a) - int(1) / (b - x);
    let one = Enclosure::point(int(1));
    if u.is_negative() {
        let e = elementary::exp(&u, BITS)?;
        one.div(&(&one + &e))
    } else {
        let e = elementary::exp(&-u, BITS)?;
        e.div(&(&one + &e))
    }
}

/// 1 on `[0, 1]`, 4 on `(1, 5/4]`, 3 on `(5/4, 5/3]`, 2 on `(5/3, 5/2]`, 1 on `(5/2, 5]`.
pub fn step5() -> FnDescriptor {
    let table = [(int(0), int(1), 1), (int(1), rat(5, 4), 4), (rat(5, 4), rat(5, 3), 3), (rat(5, 3), rat(5, 2), 2), (rat(5, 2), int(5), 1)];
    let pieces = table.iter().map(|(from, to, v)| Piece { from: from.clone(), to: to.clone(), func: FnDescriptor::constant(int(*v)) }).collect();
    FnDescriptor::exact("step5", move |x| {
        if x < &int(0) || x > &int(5) {
            return Err(Error::OutsideDomain(format!("step5 is defined on [0, 5], got {x}")));
        }
        let v = table.iter().find(|(from, to, _)| x <= to && (x > from || from.is_zero())).map(|t| t.2).unwrap_or(1);
        Ok(int(v))
    })
    .with_pieces(pieces)
    .with_bound(int(4))
}
