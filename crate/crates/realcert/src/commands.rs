//! Subcommand implementations; each returns a [`Report`] or CSV text.

use std::fmt;
use std::fmt::Write as _;

use realcert_core::approx::{self, BernsteinOperator, GalleryName, SawtoothSeries};
use realcert_core::integration::improper::{self, ImproperSpec, Partner, PartnerRelation, Region};
use realcert_core::integration::integrate_enclosure;
use realcert_core::powerseries::constants;
use realcert_core::powerseries::elementary;
use realcert_core::powerseries::taylor::{taylor_poly, TaylorTag};
use realcert_core::rational::{self, int, Rational};
use realcert_core::series::rearrange::{rearrange_pattern, rearrange_riemann};
use realcert_core::series::{classify, SeriesFamily, SeriesHandle, Test};
use realcert_core::{Direction, Enclosure, Error, FnDescriptor, Status};

use crate::grammar::{self, Bound, FnSpec, ParseError};
use crate::report::{enclosure_text, rational_text, Report};
use crate::{BernsteinArgs, Cli, Command, ConstantsArgs, ConvergeArgs, IntegrateArgs, RearrangeArgs, SampleArgs, TaylorArgs};

const DEFAULT_DIGITS: u32 = 12;
const BITS: u32 = 128;
/// Precision of the partial sums shown by `converge`.
const SUM_BITS: u32 = 256;

const MAX_HORIZON: u64 = 1_000_000;
const MAX_GAMMA_HORIZON: u64 = 100_000_000;
const MAX_STEPS: usize = 1_000_000;
const MAX_POINTS: u64 = 100_000;
const MAX_DEGREE: u32 = 400;
const MAX_ORDER: u32 = 200;

pub enum Output {
    Report(Report),
    Csv(String),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Core(e @ Error::MissingMetadata(_)) => write!(f, "refused: {e}"),
            CliError::Core(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let digits = cli.digits.unwrap_or(DEFAULT_DIGITS);
    if digits > 1000 {
        return usage("--digits must be at most 1000");
    }
    Ok(match &cli.command {
        Command::Converge(a) => Output::Report(converge(a, digits)?),
        Command::Integrate(a) => Output::Report(integrate(a, digits)?),
        Command::Constants(a) => Output::Report(constants_cmd(a, cli.digits, digits)?),
        Command::Taylor(a) => Output::Report(taylor(a, digits)?),
        Command::Bernstein(a) => Output::Report(bernstein(a, digits)?),
        Command::Rearrange(a) => Output::Report(rearrange(a, digits)?),
        Command::Sample(a) => {
            let (report, csv) = sample(a, digits)?;
            if a.csv {
                Output::Csv(csv)
            } else {
                Output::Report(report)
            }
        }
    })
}

fn required(name: &str, v: &Option<String>) -> CliResult<Rational> {
    match v {
        Some(s) => Ok(grammar::parse_number(s)?),
        None => usage(format!("--{name} is required for this family")),
    }
}

fn optional(v: &Option<String>, default: i64) -> CliResult<Rational> {
    match v {
        Some(s) => Ok(grammar::parse_number(s)?),
        None => Ok(int(default)),
    }
}

fn series_family(a: &ConvergeArgs) -> CliResult<SeriesFamily> {
    Ok(match a.family.as_str() {
        "geometric" => SeriesFamily::Geometric { a: optional(&a.a, 1)?, r: required("r", &a.r)? },
        "p-series" => SeriesFamily::PSeries { p: required("p", &a.p)? },
        "alt-p-series" => SeriesFamily::AltPSeries { p: required("p", &a.p)? },
        "alt-harmonic" => SeriesFamily::alt_harmonic(),
        "newton-gregory" => SeriesFamily::NewtonGregory,
        "factorial-power" => SeriesFamily::FactorialPower { x: required("x", &a.x)? },
        "exp-series" => SeriesFamily::ExpSeries { x: required("x", &a.x)? },
        "power-ratio" => SeriesFamily::PowerRatio { b: required("b", &a.b)?, c: required("c", &a.c)? },
        other => {
            return Err(ParseError { input: other.to_string(), position: 0, message: "unknown series family".into() }.into());
        }
    })
}

fn policy(spec: Option<&str>, delta: &Rational) -> CliResult<Vec<Test>> {
    let Some(spec) = spec else {
        let mut p = Test::default_policy();
        for t in &mut p {
            match t {
                Test::Ratio { delta: d } | Test::Root { delta: d } => *d = delta.clone(),
                _ => {}
            }
        }
        return Ok(p);
    };
    let mut out = Vec::new();
    let mut offset = 0;
    for name in spec.split(',') {
        out.push(match name.trim() {
            "geometric" => Test::Geometric,
            "p-series" => Test::PSeries,
            "nth-term" => Test::NthTerm { lower_bound: None },
            "alternating" => Test::Alternating,
            "ratio" => Test::Ratio { delta: delta.clone() },
            "root" => Test::Root { delta: delta.clone() },
            "cauchy" => Test::CauchyCriterion { eps: delta.clone() },
            _ => {
                return Err(ParseError { input: spec.to_string(), position: offset, message: format!("unknown test {name:?}") }.into());
            }
        });
        offset += name.len() + 1;
    }
    Ok(out)
}

fn converge(a: &ConvergeArgs, digits: u32) -> CliResult<Report> {
    if a.horizon == 0 || a.horizon > MAX_HORIZON {
        return usage(format!("--horizon must lie in [1, {MAX_HORIZON}]"));
    }
    let family = series_family(a)?;
    let delta = grammar::parse_number(&a.delta)?;
    let tests = policy(a.policy.as_deref(), &delta)?;
    let s = SeriesHandle::named(family.clone())?;
    let verdict = classify(&s, &tests, a.horizon)?;
    let mut r = Report::new("converge");
    r.input("family", &a.family).input("series", &family).input("horizon", a.horizon).input("delta", rational_text(&delta));
    r.input("policy", tests.iter().map(|t| t.kind().as_str()).collect::<Vec<_>>().join(","));
    r.set_verdict(&verdict, digits);
    let first = s.start();
    let last = a.horizon.max(first);
    let terms: Vec<Enclosure> = s.terms().terms(first, last)?.iter().map(|t| t.enclosure(SUM_BITS)).collect();
    r.line(format!("partial_sum[{first}]"), enclosure_text(&terms[0], digits));
    r.line(format!("partial_sum[{last}]"), enclosure_text(&Enclosure::sum_rounded(terms.iter(), SUM_BITS), digits));
    Ok(r)
}

fn descriptor(spec: &FnSpec, label: &str) -> CliResult<FnDescriptor> {
    Ok(match spec {
        FnSpec::Poly(p) => FnDescriptor::polynomial_named(label, p.clone()),
        FnSpec::Gallery(g) => approx::gallery(g)?,
        FnSpec::InversePower(p) => inverse_power(p, label),
    })
}

fn pow_enclosure(x: &Rational, e: &Rational) -> realcert_core::Result<Enclosure> {
    if rational::is_integer(e) {
        let k = i64::try_from(e.numer().clone()).map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
        return Ok(Enclosure::point(rational::powi(x, k)?));
    }
    let (lo, hi) = rational::rational_pow_bracket(x, e, BITS)?;
    Enclosure::new(lo, hi)
}

/// `x^{−p}` on `(0, ∞)`, decreasing, with its antiderivative.
fn inverse_power(p: &Rational, label: &str) -> FnDescriptor {
    let one = int(1);
    let e = -p.clone();
    let anti = if *p == one {
        FnDescriptor::new("ln x", |x| elementary::ln(x, BITS))
    } else {
        let k = &one - p;
        let scale = one.clone() / &k;
        FnDescriptor::new(format!("x^{k}/{k}"), move |x| Ok(pow_enclosure(x, &k)?.scale(&scale)))
    };
    FnDescriptor::new(label, move |x| {
        if *x <= int(0) {
            return Err(Error::Domain { function: "x^-p", at: x.to_string() });
        }
        pow_enclosure(x, &e)
    })
    .with_monotone(Direction::Decreasing, Some(int(0)), None)
    .with_antiderivative(anti)
}

fn integrate(a: &IntegrateArgs, digits: u32) -> CliResult<Report> {
    let spec = grammar::parse_fn(&a.function)?;
    let lo = grammar::parse_bound(&a.a)?;
    let hi = grammar::parse_bound(&a.b)?;
    let width = grammar::parse_number(&a.width)?;
    let mut r = Report::new("integrate");
    r.input("function", &a.function).input("a", &a.a).input("b", &a.b);
    let improper_mode = a.improper || !matches!((&lo, &hi), (Bound::Finite(_), Bound::Finite(_)));
    let singular_at_zero = matches!((&spec, &lo), (FnSpec::InversePower(_), Bound::Finite(z)) if *z == int(0));
    if improper_mode || singular_at_zero {
        r.input("mode", "improper").input("steps", a.steps);
        return improper_report(r, &spec, &a.function, lo, hi, a.steps, digits);
    }
    let (Bound::Finite(x0), Bound::Finite(x1)) = (lo, hi) else {
        return usage("finite limits expected");
    };
    r.input("width", rational_text(&width));
    let f = descriptor(&spec, &a.function)?;
    let res = integrate_enclosure(&f, &x0, &x1, &width)?;
    r.set_enclosure(&res.enclosure, digits);
    if !res.met {
        r.set_status(Status::Inconclusive);
    }
    r.line("cells", res.cells.to_string()).line("width_met", res.met.to_string()).line("exact", res.exact.to_string());
    r.line("width", enclosure_text(&Enclosure::point(res.enclosure.width()), digits));
    Ok(r)
}

fn improper_report(mut r: Report, spec: &FnSpec, label: &str, lo: Bound, hi: Bound, steps: u32, digits: u32) -> CliResult<Report> {
    if steps == 0 || steps > 60 {
        return usage("--steps must lie in [1, 60]");
    }
    let FnSpec::InversePower(p) = spec else {
        return Err(Error::MissingMetadata(format!("{label} has no registered comparison partner; improper mode needs improper:x^-p")).into());
    };
    let one = int(1);
    let (region, partner) = match (lo, hi) {
        (Bound::Finite(a), Bound::PosInf) if a > int(0) => {
            let relation = if *p > one { PartnerRelation::Identical } else { PartnerRelation::Minorizes };
            (Region::Upper(a.clone()), Partner::power_at_infinity(one.clone(), p.clone(), a, relation)?)
        }
        (Bound::Finite(a), Bound::Finite(b)) if a == int(0) && b > int(0) => {
            let relation = if *p < one { PartnerRelation::Identical } else { PartnerRelation::Minorizes };
            (Region::OpenLeft(a.clone(), b.clone()), Partner::power_at_singularity(one.clone(), p.clone(), a, b, relation)?)
        }
        _ => return usage("improper mode supports [a, inf) with a > 0 and (0, b] with b > 0"),
    };
    let f = inverse_power(p, label);
    let spec = ImproperSpec::new(f, region).with_partner(partner).nonneg();
    let rep = improper::improper_integral(&spec, steps)?;
    r.set_verdict(&rep.verdict, digits);
    for step in &rep.trace {
        let tail = step.tail.as_ref().map(|t| enclosure_text(t, digits)).unwrap_or_else(|| "none".into());
        r.line(format!("cutoff {}", rational_text(&step.cutoff)), format!("body {} tail {}", enclosure_text(&step.body, digits), tail));
    }
    Ok(r)
}

fn constants_cmd(a: &ConstantsArgs, target: Option<u32>, digits: u32) -> CliResult<Report> {
    let mut r = Report::new("constants");
    r.input("name", &a.name).input("digits", digits);
    let horizon = |default: u64, cap: u64| -> CliResult<u64> {
        let n = a.horizon.unwrap_or(default);
        if n == 0 || n > cap {
            return usage(format!("--horizon must lie in [1, {cap}]"));
        }
        Ok(n)
    };
    let (n, e) = match a.name.as_str() {
        "e" => {
            let n = match a.horizon {
                Some(_) => horizon(20, 10_000)?,
                None => {
                    let goal = rational::ten_pow_neg(digits);
                    let mut n = 1;
                    while Rational::new(1.into(), rational::factorial(n) * n) > goal {
                        n += 1;
                    }
                    n
                }
            };
            (n, constants::e(n)?)
        }
        "ln2" => {
            let n = horizon(10_000, MAX_HORIZON)?;
            (n, constants::ln2(n)?)
        }
        "pi-over-4" => {
            let n = horizon(10_000, MAX_HORIZON)?;
            (n, constants::pi_over_4(n)?)
        }
        "gamma" => {
            let n = horizon(10_000, MAX_GAMMA_HORIZON)?;
            let g = constants::euler_gamma(n)?;
            r.line("gap c_n - c_2n", enclosure_text(&g.gap, digits));
            (n, g.enclosure)
        }
        other => {
            return Err(ParseError { input: other.to_string(), position: 0, message: "unknown constant (e, ln2, pi-over-4, gamma)".into() }.into());
        }
    };
    r.input("horizon", n);
    r.set_enclosure(&e, digits);
    r.line("width", enclosure_text(&Enclosure::point(e.width()), digits));
    if let Some(d) = target {
        let met = e.width() <= rational::ten_pow_neg(d);
        r.line("target_width", format!("1e-{d}")).line("target_met", met.to_string());
        if !met {
            r.set_status(Status::Inconclusive);
        }
    }
    Ok(r)
}

fn taylor(a: &TaylorArgs, digits: u32) -> CliResult<Report> {
    let tag = match a.function.as_str() {
        "sin" => TaylorTag::Sin,
        "cos" => TaylorTag::Cos,
        "exp" => TaylorTag::Exp,
        other => {
            return Err(ParseError { input: other.to_string(), position: 0, message: "unknown function (sin, cos, exp)".into() }.into());
        }
    };
    if a.order > MAX_ORDER {
        return usage(format!("--order must be at most {MAX_ORDER}"));
    }
    let x0 = grammar::parse_number(&a.at)?;
    let x = grammar::parse_number(&a.x)?;
    let approx = taylor_poly(tag, x0.clone(), a.order)?;
    let rep = approx.remainder_enclosure(&x)?;
    let mut r = Report::new("taylor");
    r.input("function", &a.function).input("order", a.order).input("at", rational_text(&x0)).input("x", rational_text(&x));
    r.set_enclosure(&rep.value, digits);
    r.line("T_n(x)", rational_text(&rep.tn));
    r.line("remainder", enclosure_text(&rep.remainder, digits));
    if rep.lower_strict {
        r.line("strict", format!("{}(x) > T_n(x)", a.function));
    }
    if rep.upper_strict {
        r.line("strict", format!("{}(x) < T_n(x)", a.function));
    }
    Ok(r)
}

fn exact_fn(spec: &str) -> CliResult<FnDescriptor> {
    let parsed = grammar::parse_fn(spec)?;
    if let FnSpec::InversePower(_) = parsed {
        return usage("improper integrands cannot be sampled here");
    }
    descriptor(&parsed, spec)
}

fn interval(from: &str, to: &str) -> CliResult<(Rational, Rational)> {
    let (a, b) = (grammar::parse_number(from)?, grammar::parse_number(to)?);
    if a >= b {
        return usage(format!("empty interval [{a}, {b}]"));
    }
    Ok((a, b))
}

fn bernstein(a: &BernsteinArgs, digits: u32) -> CliResult<Report> {
    if a.degree == 0 || a.degree > MAX_DEGREE {
        return usage(format!("--degree must lie in [1, {MAX_DEGREE}]"));
    }
    let f = exact_fn(&a.function)?;
    let (lo, hi) = interval(&a.from, &a.to)?;
    let op = BernsteinOperator::on_interval(&f, a.degree, lo.clone(), hi.clone())?;
    let grid = a.grid.unwrap_or(2 * u64::from(a.degree));
    if grid == 0 || grid > MAX_POINTS {
        return usage(format!("--grid must lie in [1, {MAX_POINTS}]"));
    }
    let mut r = Report::new("bernstein");
    r.input("function", &a.function).input("degree", a.degree).input("from", rational_text(&lo)).input("to", rational_text(&hi)).input("grid", grid);
    let (dev, at) = op.grid_deviation(&f, grid)?;
    match &a.x {
        Some(x) => {
            let x = grammar::parse_number(x)?;
            r.input("x", rational_text(&x));
            let v = op.apply(&x)?;
            r.set_enclosure(&Enclosure::point(v.clone()), digits);
            r.line("B_n(f)(x)", rational_text(&v));
            r.line("f(x)", rational_text(&f.eval_exact(&x)?));
        }
        None => {
            r.set_enclosure(&Enclosure::point(dev.clone()), digits);
        }
    }
    r.line("grid_deviation", rational_text(&dev)).line("grid_argmax", rational_text(&at));
    if let (Some(delta), Some(eps)) = (&a.delta, &a.eps) {
        let m = f.meta().bound.clone().ok_or_else(|| Error::MissingMetadata(format!("{}: bound M on |f|", a.function)))?;
        let (delta, eps) = (grammar::parse_number(delta)?, grammar::parse_number(eps)?);
        let bound = approx::bernstein_error_bound(&m, &delta, &eps, a.degree)?;
        r.line("constructive_bound", rational_text(&bound));
        r.line("bound_hypothesis", format!("|f(x) - f(y)| < {} whenever |x - y| < {}", rational_text(&(&eps / int(2))), rational_text(&delta)));
    } else if a.delta.is_some() || a.eps.is_some() {
        return usage("--delta and --eps go together");
    }
    Ok(r)
}

fn rearrange(a: &RearrangeArgs, digits: u32) -> CliResult<Report> {
    let family = match a.series.as_str() {
        "alt-harmonic" => SeriesFamily::alt_harmonic(),
        "alt-p-series" => SeriesFamily::AltPSeries { p: required("p", &a.p)? },
        other => {
            return Err(ParseError { input: other.to_string(), position: 0, message: "unknown series (alt-harmonic, alt-p-series)".into() }.into());
        }
    };
    if a.steps == 0 || a.steps > MAX_STEPS {
        return usage(format!("--steps must lie in [1, {MAX_STEPS}]"));
    }
    let samples = a.samples.max(1);
    let s = SeriesHandle::named(family.clone())?;
    let mut r = Report::new("rearrange");
    r.input("series", &family).input("steps", a.steps).input("samples", samples);
    match (&a.pattern, &a.target) {
        (Some(pattern), None) => {
            let (p, q) = grammar::parse_pattern(pattern)?;
            let blocks = a.steps / (p + q);
            if blocks == 0 {
                return usage("--steps is shorter than one block");
            }
            r.input("pattern", format!("{p},{q}"));
            let sums = rearrange_pattern(&s, p, q, blocks)?;
            let every = blocks.div_ceil(samples);
            for (i, e) in sums.iter().enumerate() {
                let b = i + 1;
                if b % every == 0 || b == blocks {
                    r.line(format!("t[{}]", b * (p + q)), enclosure_text(e, digits));
                }
            }
            if let Some(last) = sums.last() {
                r.set_enclosure(last, digits);
            }
            if family == SeriesFamily::alt_harmonic() {
                let ratio = Rational::new((p as i64).into(), (q as i64).into());
                let limit = &elementary::ln2(BITS) + &elementary::ln(&ratio, BITS)?.scale(&Rational::new(1.into(), 2.into()));
                r.line("limit ln2 + ln(p/q)/2", enclosure_text(&limit, digits));
            }
        }
        (None, Some(target)) => {
            let t = grammar::parse_number(target)?;
            r.input("target", rational_text(&t));
            let out = rearrange_riemann(&s, &t, a.steps)?;
            let every = a.steps.div_ceil(samples);
            for (i, e) in out.partial_sums.iter().enumerate() {
                if (i + 1) % every == 0 || i + 1 == a.steps {
                    r.line(format!("t[{}]", i + 1), enclosure_text(e, digits));
                }
            }
            if let Some(last) = out.partial_sums.last() {
                r.set_enclosure(last, digits);
            }
            let ok = out.flips.iter().all(|f| f.within_last_term);
            r.line("flips", out.flips.len().to_string()).line("overshoot_within_last_term", ok.to_string());
        }
        _ => return usage("give exactly one of --pattern or --target"),
    }
    Ok(r)
}

fn sample(a: &SampleArgs, digits: u32) -> CliResult<(Report, String)> {
    if a.points < 2 || a.points > MAX_POINTS {
        return usage(format!("--points must lie in [2, {MAX_POINTS}]"));
    }
    let (lo, hi) = interval(&a.from, &a.to)?;
    let spec = grammar::parse_fn(&a.function)?;
    let mut r = Report::new("sample");
    r.input("function", &a.function).input("from", rational_text(&lo)).input("to", rational_text(&hi)).input("points", a.points);
    let step = (&hi - &lo) / int(a.points as i64 - 1);
    let xs: Vec<Rational> = (0..a.points).map(|j| &lo + &step * int(j as i64)).collect();
    let dec = |x: &Rational| rational::decimal_nearest(x, digits);
    let mut csv = String::new();
    if let Some(k) = a.layers {
        let FnSpec::Gallery(GalleryName::Sawtooth { levels }) = spec else {
            return usage("--layers applies to gallery:sawtooth only");
        };
        if a.bernstein.is_some() {
            return usage("--layers and --bernstein are exclusive");
        }
        let ss = SawtoothSeries::new(levels)?;
        if k > levels {
            return usage(format!("--layers must be at most {levels}"));
        }
        r.input("layers", k);
        csv.push_str("x,value,layer\n");
        for x in &xs {
            for layer in 0..=k {
                let v = dec(&ss.partial(layer, x));
                let _ = writeln!(csv, "{},{},{}", dec(x), v, layer);
                r.line(format!("{} @ {layer}", dec(x)), v);
            }
        }
        return Ok((r, csv));
    }
    let f = exact_fn(&a.function)?;
    let op = match a.bernstein {
        Some(n) if n == 0 || n > MAX_DEGREE => return usage(format!("--bernstein must lie in [1, {MAX_DEGREE}]")),
        Some(n) => {
            r.input("bernstein", n);
            Some(BernsteinOperator::on_interval(&f, n, lo.clone(), hi.clone())?)
        }
        None => None,
    };
    csv.push_str("x,value\n");
    for x in &xs {
        let v = match &op {
            Some(op) => dec(&op.apply(x)?),
            None => dec(&f.eval(x)?.midpoint()),
        };
        let _ = writeln!(csv, "{},{}", dec(x), v);
        r.line(dec(x), v);
    }
    Ok((r, csv))
}
