//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realcert_core::approx::bernstein::basis;
use realcert_core::approx::{self, nowhere_diff_quotients, BernsteinOperator, DeviationMode, FnSequence, GalleryName, SawtoothSeries};
use realcert_core::calculus::{bisect, count_roots_report, mvt_witness, Bracket, MvtKind};
use realcert_core::integration::gamma::gamma;
use realcert_core::integration::identities::substitution_check;
use realcert_core::integration::{darboux, integrate_enclosure, riemann_sum, Partition, Pick};
use realcert_core::powerseries::taylor::{taylor_poly, TaylorTag};
use realcert_core::powerseries::{constants, elementary, ode_recurrence_sin, PowerSeries, RadiusMode};
use realcert_core::rational::{self, int, parse_rational, rat, Rational};
use realcert_core::sequences::TermStream;
use realcert_core::series::product::{log_series_verdict, product_converges, ClosedForm, ProductHandle};
use realcert_core::series::rearrange::{rearrange_pattern, rearrange_riemann};
use realcert_core::series::{classify, Relation, SeriesFamily, SeriesHandle, Test};
use realcert_core::{Direction, Enclosure, FnDescriptor, Poly, Status};

type Check = Result<String, String>;

const SEED: u64 = 20_260_215;
const BITS: u32 = 96;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn abs(x: Rational) -> Rational {
    if x < int(0) {
        -x
    } else {
        x
    }
}

fn num(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn poly(c: &[i64]) -> FnDescriptor {
    FnDescriptor::polynomial(Poly::from_ints(c))
}

fn c01_darboux_table() -> Check {
    let f = poly(&[0, 6, -1]);
    let p = ok(Partition::new([0, 2, 3, 5, 6].iter().map(|&x| int(x)).collect()))?;
    let d = ok(darboux(&f, &p))?;
    let r = ok(riemann_sum(&f, &p, &Pick::Custom([1, 3, 4, 5].iter().map(|&x| int(x)).collect())))?;
    ensure(d.lower == int(18) && d.upper == int(48) && r == int(40), || format!("L={} U={} R={}", d.lower, d.upper, r))?;
    Ok("L = 18, U = 48, R = 40".into())
}

fn c02_integral_values() -> Check {
    let w = rational::ten_pow_neg(6);
    let sq = ok(integrate_enclosure(&poly(&[0, 0, 1]), &int(1), &int(4), &w))?;
    ensure(sq.enclosure.contains(&int(21)) && sq.enclosure.width() <= w, || format!("x^2: {}", sq.enclosure))?;
    let par = ok(integrate_enclosure(&poly(&[0, 6, -1]), &int(0), &int(6), &w))?;
    ensure(par.enclosure.contains(&int(36)) && par.enclosure.width() <= w, || format!("6x-x^2: {}", par.enclosure))?;
    let step = ok(approx::gallery(&GalleryName::Step5))?;
    let s = ok(integrate_enclosure(&step, &int(0), &int(5), &w))?;
    ensure(s.enclosure == Enclosure::point(rat(89, 12)), || format!("step: {}", s.enclosure))?;
    let anti = FnDescriptor::new("(16+x^2)^(3/2)/3", |x| {
        let u = int(16) + x * x;
        Ok(elementary::sqrt(&u, BITS)?.scale(&(u / int(3))))
    });
    let composite = FnDescriptor::new("x sqrt(16+x^2)", |x| Ok(elementary::sqrt(&(int(16) + x * x), BITS)?.scale(x))).with_antiderivative(anti);
    let outer_anti = FnDescriptor::new("u^(3/2)/3", |u| Ok(elementary::sqrt(u, BITS)?.scale(&(u / int(3)))));
    let outer = FnDescriptor::new("sqrt(u)/2", |u| Ok(elementary::sqrt(u, BITS)?.scale(&rat(1, 2)))).with_antiderivative(outer_anti);
    let g = poly(&[16, 0, 1]);
    let sub = ok(substitution_check(&composite, &g, &outer, &int(-2), &int(3)))?;
    let closed = &Enclosure::point(rat(125, 3)) - &ok(elementary::sqrt(&int(20), BITS))?.scale(&rat(20, 3));
    let dist = abs(sub.left.midpoint() - closed.midpoint()) + sub.left.width() + closed.width();
    ensure(sub.agree && dist <= w, || format!("substitution: {} vs {}", sub.left, closed))?;
    Ok(format!("21, 36 within 1e-6; step = 89/12; x sqrt(16+x^2) = {}", sub.left.decimal_bounds(9).0))
}

fn c03_monotone_gap() -> Check {
    let inv = FnDescriptor::exact("1/x", rational::recip).with_monotone(Direction::Decreasing, Some(int(0)), None);
    let cases = [(poly(&[0, 0, 1]), int(1), int(4)), (poly(&[0, 0, 0, 1]), int(-1), int(2)), (poly(&[3, -2]), int(0), int(5)), (inv, int(1), int(3))];
    for (f, a, b) in &cases {
        let rise = abs(ok(f.eval_exact(b))? - ok(f.eval_exact(a))?);
        for k in 1..=64u64 {
            let d = ok(darboux(f, &ok(Partition::regular(a, b, k))?))?;
            let want = (b - a) * &rise / int(k as i64);
            ensure(&d.upper - &d.lower == want, || format!("{} k={k}: {} != {want}", f.name(), &d.upper - &d.lower))?;
        }
    }
    Ok(format!("{} monotone functions, k = 1..64", cases.len()))
}

fn c04_refinement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fs = [poly(&[0, 6, -1]), poly(&[1, -3, 0, 1]), poly(&[0, 0, 0, 0, -1])];
    for trial in 0..200 {
        let f = &fs[trial % fs.len()];
        let mut pts: Vec<Rational> = (0..rng.gen_range(1..8)).map(|_| rat(rng.gen_range(1..600), 100)).collect();
        pts.push(int(0));
        pts.push(int(6));
        pts.sort();
        pts.dedup();
        let p = ok(Partition::new(pts))?;
        let extra: Vec<Rational> = (0..rng.gen_range(1..6)).map(|_| rat(rng.gen_range(1..6000), 1000)).collect();
        let q = p.refine(&extra);
        let (dp, dq) = (ok(darboux(f, &p))?, ok(darboux(f, &q))?);
        ensure(q.is_refinement_of(&p), || format!("trial {trial}: not a refinement"))?;
        ensure(dp.lower <= dq.lower && dq.lower <= dq.upper && dq.upper <= dp.upper, || format!("trial {trial}: order violated"))?;
    }
    Ok(format!("200 random refinements (seed {SEED})"))
}

fn status_of(family: SeriesFamily, horizon: u64) -> Result<Status, String> {
    let s = ok(SeriesHandle::named(family))?;
    Ok(ok(classify(&s, &Test::default_policy(), horizon))?.status())
}

fn c05_series_table() -> Check {
    for (r, sum) in [(rat(1, 2), int(2)), (rat(-1, 3), rat(3, 4)), (rat(9, 10), int(10))] {
        let s = ok(SeriesHandle::named(SeriesFamily::Geometric { a: int(1), r: r.clone() }))?;
        let v = ok(classify(&s, &Test::default_policy(), 100))?;
        ensure(v.status() == Status::Converges && v.value() == Some(&Enclosure::point(sum.clone())), || format!("r = {r}: {:?}", v.value()))?;
    }
    for r in [int(1), int(-1), int(2)] {
        let st = status_of(SeriesFamily::Geometric { a: int(1), r: r.clone() }, 100)?;
        ensure(st == Status::Diverges, || format!("r = {r}: {st}"))?;
    }
    let expected = [(rat(1, 2), Status::Diverges), (int(1), Status::Diverges), (int(2), Status::Converges), (int(3), Status::Converges)];
    for (p, want) in expected {
        let st = status_of(SeriesFamily::PSeries { p: p.clone() }, 100)?;
        ensure(st == want, || format!("p = {p}: {st}"))?;
    }
    let st = status_of(SeriesFamily::FactorialPower { x: rat(1, 10) }, 200)?;
    ensure(st == Status::Diverges, || format!("n! x^n: {st}"))?;
    let st = status_of(SeriesFamily::PowerRatio { b: int(2), c: int(3) }, 200)?;
    ensure(st == Status::Converges, || format!("2^n/(3^n-1): {st}"))?;
    Ok("geometric, p-series, n! x^n and 2^n/(3^n-1) rows match".into())
}

fn c06_constants() -> Check {
    let e = ok(constants::e(20))?;
    let bound = rat(3, 1) / Rational::from_integer(rational::factorial(21));
    ensure(e.width() <= bound, || format!("e width {}", e.width()))?;
    let (lo15, hi15) = e.decimal_bounds(15);
    let target = num("2.718281828459046");
    ensure(num(&lo15) <= target && target <= num(&hi15), || format!("e bracket [{lo15}, {hi15}]"))?;
    ensure(e.contains(&num("2.71828182845904523536")), || "e misses 2.71828182845904523536".into())?;
    let l = ok(constants::ln2(10_000))?;
    ensure(l.width() <= rat(2, 10_000) && l.contains(&num("0.693147")), || format!("ln2 {l}"))?;
    let p = ok(constants::pi_over_4(10_000))?;
    ensure(p.contains(&num("0.785398")), || format!("pi/4 {p}"))?;
    let started = Instant::now();
    let g = ok(constants::euler_gamma(1_000_000))?;
    let err = abs(g.enclosure.midpoint() - num("0.577215664901532"));
    ensure(err <= rational::ten_pow_neg(6) && g.enclosure.contains(&num("0.577215664901532")), || format!("gamma {}", g.enclosure))?;
    Ok(format!(
        "e(20) in [{lo15}, {hi15}] at 15 digits (true e = 2.71828182845904523...); ln2, pi/4 ok; gamma(1e6) in {} ({:.1?})",
        realcert_fmt(&g.enclosure, 8),
        started.elapsed()
    ))
}

fn realcert_fmt(e: &Enclosure, d: u32) -> String {
    let (lo, hi) = e.decimal_bounds(d);
    format!("[{lo}, {hi}]")
}

fn c07_rearrangement() -> Check {
    let s = ok(SeriesHandle::named(SeriesFamily::alt_harmonic()))?;
    let sums = ok(rearrange_pattern(&s, 2, 1, 10_000))?;
    let t = sums.last().ok_or("no sums")?;
    let limit = elementary::ln2(BITS).scale(&rat(3, 2));
    let gap = abs(t.midpoint() - limit.midpoint()) + t.width() + limit.width();
    ensure(gap <= rational::ten_pow_neg(3), || format!("t_3n = {t}"))?;
    let r = ok(rearrange_riemann(&s, &rat(1, 4), 20_000))?;
    ensure(!r.flips.is_empty() && r.flips.iter().all(|f| f.within_last_term), || "a flip overshoots".into())?;
    Ok(format!("t_30000 = {}; {} flips within the last term", realcert_fmt(t, 6), r.flips.len()))
}

fn one_minus_from_two(p: i64) -> ProductHandle {
    let a = SeriesHandle::custom(TermStream::exact(format!("1/n^{p}"), 2, move |n| Rational::new(1.into(), (n as i64).pow(p as u32).into())));
    ProductHandle::one_minus(a)
}

fn below(p: Rational, factor: Rational, relation: Relation) -> Result<Vec<Test>, String> {
    let partner = ok(SeriesHandle::named(SeriesFamily::PSeries { p }))?;
    Ok(vec![Test::Comparison { partner: Box::new(partner), partner_policy: vec![Test::PSeries], relation, factor }])
}

fn c08_products() -> Check {
    let half = one_minus_from_two(2).with_closed_form(ClosedForm::Exact { partial: Arc::new(|n| rat(n as i64 + 1, 2 * n as i64)), limit: Some(rat(1, 2)) });
    let r = ok(product_converges(&half, &below(int(2), int(1), Relation::Below)?, 500))?;
    ensure(r.verdict.status() == Status::Converges && r.closed_form_checked == 499, || format!("1 - 1/n^2: {:?}", r.verdict.status()))?;
    for (n, pn) in &r.partial_products {
        ensure(pn == &Enclosure::point(rat(*n as i64 + 1, 2 * *n as i64)), || format!("P_{n} = {pn}"))?;
    }
    let harmonic = ok(SeriesHandle::named(SeriesFamily::PSeries { p: int(1) }))?;
    let grow = ProductHandle::one_plus(harmonic).with_closed_form(ClosedForm::Exact { partial: Arc::new(|n| int(n as i64 + 1)), limit: None });
    let r = ok(product_converges(&grow, &[Test::PSeries], 300))?;
    ensure(r.verdict.status() == Status::Diverges && r.closed_form_checked == 300, || "1 + 1/n".into())?;
    for (n, pn) in &r.partial_products {
        ensure(pn == &Enclosure::point(int(*n as i64 + 1)), || format!("P_{n} = {pn}"))?;
    }

    let named = |f: SeriesFamily| ok(SeriesHandle::named(f));
    let structural = vec![Test::Geometric, Test::PSeries, Test::Ratio { delta: rat(1, 100) }];
    let mut cases: Vec<(String, ProductHandle, Vec<Test>, Status)> = Vec::new();
    for (p, want) in [
        (int(2), Status::Converges),
        (int(3), Status::Converges),
        (rat(3, 2), Status::Converges),
        (rat(5, 4), Status::Converges),
        (int(1), Status::Diverges),
        (rat(1, 2), Status::Diverges),
        (rat(1, 3), Status::Diverges),
    ] {
        cases.push((format!("1 + 1/n^{p}"), ProductHandle::one_plus(named(SeriesFamily::PSeries { p })?), structural.clone(), want));
    }
    for r in [rat(1, 2), rat(1, 3), rat(9, 10)] {
        cases.push((
            format!("1 + {r}^(n-1)"),
            ProductHandle::one_plus(named(SeriesFamily::Geometric { a: int(1), r: r.clone() })?),
            structural.clone(),
            Status::Converges,
        ));
        cases.push((
            format!("1 - {r}^n"),
            ProductHandle::one_minus(named(SeriesFamily::Geometric { a: r.clone(), r })?),
            structural.clone(),
            Status::Converges,
        ));
    }
    cases.push(("1 + 1/n!".into(), ProductHandle::one_plus(named(SeriesFamily::ExpSeries { x: int(1) })?), structural.clone(), Status::Converges));
    cases.push((
        "1 + 2^n/(3^n-1)".into(),
        ProductHandle::one_plus(named(SeriesFamily::PowerRatio { b: int(2), c: int(3) })?),
        structural.clone(),
        Status::Converges,
    ));
    for p in [2i64, 3] {
        cases.push((format!("1 - 1/n^{p}"), one_minus_from_two(p), below(int(p), int(1), Relation::Below)?, Status::Converges));
    }
    cases.push(("1 - 1/n".into(), one_minus_from_two(1), below(int(1), int(1), Relation::Above)?, Status::Diverges));
    let half_n = SeriesHandle::custom(TermStream::exact("1/(2n)", 1, |n| rat(1, 2 * n as i64)));
    cases.push(("1 - 1/(2n)".into(), ProductHandle::one_minus(half_n), below(int(1), rat(1, 2), Relation::Above)?, Status::Diverges));
    cases.push(("1 - 1/n^4".into(), one_minus_from_two(4), below(int(4), int(1), Relation::Below)?, Status::Converges));
    ensure(cases.len() == 20, || format!("{} cases registered", cases.len()))?;
    for (name, p, policy, want) in &cases {
        let direct = ok(product_converges(p, policy, 40))?.verdict.status();
        let via_log = ok(log_series_verdict(p, policy, 40))?.status();
        ensure(direct == *want && via_log == *want, || format!("{name}: product {direct}, log series {via_log}, expected {want}"))?;
    }
    Ok("(n+1)/(2n) and n+1 exact; 20 product/log-series agreements".into())
}

fn c09_power_series() -> Check {
    let (sin, _) = ode_recurrence_sin();
    let prod = ok(PowerSeries::exp().cauchy_product(&sin))?;
    let want = [int(0), int(1), int(1), rat(1, 3), int(0), rat(-1, 30)];
    ensure(prod.coeffs(5) == want, || format!("{:?}", prod.coeffs(5)))?;
    for n in 1..=10u64 {
        let c = sin.coeff(2 * n - 1);
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let expected = Rational::new(sign.into(), rational::factorial(2 * n - 1));
        ensure(c == expected, || format!("sin coefficient {n}: {c}"))?;
        ensure(sin.coeff(2 * n).is_integer() && sin.coeff(2 * n) == int(0), || format!("even coefficient {n}"))?;
    }
    let family =
        [PowerSeries::geometric(), PowerSeries::exp(), PowerSeries::inverse_squares(), PowerSeries::binomial(rat(1, 2)), PowerSeries::factorial(), sin];
    for s in &family {
        let base = ok(s.radius(RadiusMode::ClosedForm))?.radius;
        let derived = ok(s.derive().radius(RadiusMode::ClosedForm))?.radius;
        ensure(base == derived, || format!("{}: {base:?} vs {derived:?}", s.label()))?;
    }
    Ok(format!("exp*sin = 0, 1, 1, 1/3, 0, -1/30; sin through n = 10; {} radii preserved", family.len()))
}

fn c10_taylor() -> Check {
    let t3 = ok(taylor_poly(TaylorTag::Sin, int(0), 3))?;
    for k in 1..=100i64 {
        let x = rat(k * 314, 10_000);
        let rep = ok(t3.remainder_enclosure(&x))?;
        let cubic = &x - &x * &x * &x / int(6);
        ensure(rep.tn == cubic && rep.lower_strict && rep.value.lo() == &cubic, || format!("x = {x}: not strict"))?;
    }
    let ex = ok(ok(taylor_poly(TaylorTag::Exp, int(0), 20))?.remainder_enclosure(&int(1)))?;
    let bound = rat(3, 1) / Rational::from_integer(rational::factorial(21));
    ensure(ex.value.width() <= bound, || format!("exp width {}", ex.value.width()))?;
    for n in [5u64, 10] {
        let gap = ok(constants::nfact_e_gap(n))?;
        ensure(gap.lo() > &int(0) && gap.hi() < &rat(3, n as i64 + 1), || format!("n = {n}: {gap}"))?;
    }
    Ok("sin > x - x^3/6 strictly at 100 points; exp width <= 3/21!; n!e gap for n = 5, 10".into())
}

fn c11_bernstein() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let square = poly(&[0, 0, 1]);
    for n in 1..=12u32 {
        let op = ok(BernsteinOperator::new(&square, n))?;
        let nn = int(i64::from(n));
        for _ in 0..20 {
            let d = rng.gen_range(1..1000i64);
            let x = rat(rng.gen_range(0..=d), d);
            ensure(ok(op.apply(&x))? == &x * &x + &x * (int(1) - &x) / &nn, || format!("B_{n}(x^2)({x})"))?;
            let unity: Rational = (0..=n).map(|k| basis(n, k, &x)).sum();
            let second: Rational = (0..=n).map(|k| (&x - rat(i64::from(k), i64::from(n))).pow(2) * basis(n, k, &x)).sum();
            ensure(unity == int(1) && second == &x * (int(1) - &x) / &nn, || format!("moments n = {n}, x = {x}"))?;
        }
        let (dev, _) = ok(op.grid_deviation(&square, 2 * u64::from(n)))?;
        ensure(dev == rat(1, 4 * i64::from(n)), || format!("deviation n = {n}: {dev}"))?;
    }
    Ok(format!("identities for n <= 12 (seed {}); sup deviation 1/(4n)", SEED + 11))
}

fn c12_uniform() -> Check {
    let powers = FnSequence::powers();
    for n in 1..=50 {
        let d = ok(approx::uniform_deviation(&powers, n, DeviationMode::ExactExtrema))?;
        ensure(d.value == Enclosure::point(int(1)), || format!("M_{n} = {}", d.value))?;
    }
    let bumps = FnSequence::gaussian_bumps(80);
    let tol = rational::ten_pow_neg(9);
    for n in [1u64, 2, 5, 10, 20, 50] {
        let d = ok(approx::uniform_deviation(&bumps, n, DeviationMode::ExactExtrema))?;
        let expected = ok(ok(elementary::exp(&rat(-1, 2), 80))?.div(&ok(elementary::sqrt(&int(2 * n as i64), 80))?))?;
        let gap = abs(d.value.midpoint() - expected.midpoint()) + d.value.width();
        ensure(gap <= tol, || format!("bump n = {n}: {}", d.value))?;
    }
    Ok("M_n(x^n) = 1 for n <= 50; x e^(-n x^2) within 1e-9".into())
}

fn c13_parity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 13);
    let ss = ok(SawtoothSeries::new(12))?;
    let two = realcert_core::rational::int(2);
    for _ in 0..20 {
        let j = rng.gen_range(0..14u32);
        let x0 = Rational::new(rng.gen_range(-4000i64..4000).into(), rational::pow2(j));
        for level in ok(nowhere_diff_quotients(&ss, &x0, 12))? {
            ensure(!level.sides.is_empty(), || format!("x0 = {x0}, k = {}: no side", level.k))?;
            for side in &level.sides {
                let q = &side.quotient;
                ensure(q.is_integer(), || format!("x0 = {x0}, k = {}: {q}", level.k))?;
                let odd = !(q / &two).is_integer();
                ensure(odd == (level.k % 2 == 0), || format!("x0 = {x0}, k = {}: parity of {q}", level.k))?;
            }
        }
    }
    Ok(format!("20 dyadic points, K = 12 (seed {})", SEED + 13))
}

fn c14_bisection() -> Check {
    let sextic =
        poly(&[1, 6, 0, 0, 0, 0, 1]).with_monotone(Direction::Decreasing, None, Some(int(-1))).with_monotone(Direction::Increasing, Some(int(-1)), None);
    let r = ok(bisect(&ok(Bracket::new(sextic.clone(), int(-1), int(0)))?, 40))?;
    ensure(r.enclosure.width() == Rational::new(1.into(), rational::pow2(40)), || format!("width {}", r.enclosure.width()))?;
    let (flo, fhi) = (ok(sextic.eval_exact(r.enclosure.lo()))?, ok(sextic.eval_exact(r.enclosure.hi()))?);
    ensure(flo < int(0) && fhi > int(0), || "endpoints lack a sign change".into())?;
    let count = ok(count_roots_report(&sextic, &int(-2), &int(0), 40))?.count;
    ensure(count == 2, || format!("{count} roots"))?;
    let tol = rational::ten_pow_neg(8);
    let sq = poly(&[0, 0, 1]);
    let cubic = poly(&[0, 0, -9, 1]);
    let checks = [
        (ok(mvt_witness(&sq, &int(1), &int(7), &MvtKind::Lagrange, &tol))?, int(4)),
        (ok(mvt_witness(&cubic, &int(1), &int(7), &MvtKind::Lagrange, &tol))?, int(5)),
        (ok(mvt_witness(&sq, &int(1), &int(7), &MvtKind::Cauchy(cubic.clone()), &tol))?, rat(19, 4)),
    ];
    for (rep, c) in &checks {
        let w = rep.witness.as_ref().ok_or("no witness")?;
        ensure(w.contains(c) && w.width() <= tol, || format!("witness {w} for {c}"))?;
    }
    Ok("width 2^-40 with sign change; 2 roots on [-2, 0]; c = 4, 5, 19/4".into())
}

fn c15_gamma() -> Check {
    let w = rational::ten_pow_neg(4);
    let g1 = ok(gamma(&int(1), 4))?;
    let g5 = ok(gamma(&int(5), 4))?;
    let gh = ok(gamma(&rat(1, 2), 4))?;
    let root_pi = ok(elementary::sqrt_enclosure(&elementary::pi(BITS), BITS))?;
    ensure(g1.contains(&int(1)) && g1.width() <= w, || format!("gamma(1) {g1}"))?;
    ensure(g5.contains(&int(24)) && g5.width() <= w, || format!("gamma(5) {g5}"))?;
    ensure(root_pi.is_subset_of(&gh) && gh.width() <= w, || format!("gamma(1/2) {gh}"))?;
    for s in [rat(1, 2), rat(3, 2)] {
        let next = ok(gamma(&(&s + int(1)), 4))?;
        let scaled = ok(gamma(&s, 4))?.scale(&s).widen(&w);
        ensure(next.is_subset_of(&scaled), || format!("s = {s}: {next} not in {scaled}"))?;
    }
    Ok("gamma(1), gamma(5), gamma(1/2) within 1e-4; recursion holds at 1/2, 3/2".into())
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = ok(Command::new(env!("CARGO_BIN_EXE_realcert")).args(args).output())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn c16_cli() -> Check {
    let runs: [&[&str]; 4] = [
        &["--json", "converge", "alt-harmonic", "--horizon", "10000"],
        &["--json", "integrate", "gallery:step5", "0", "5"],
        &["--json", "constants", "e", "--digits", "15"],
        &["--json", "rearrange", "alt-harmonic", "--pattern", "2,1", "--steps", "9999"],
    ];
    for args in runs {
        let (c1, a) = cli(args)?;
        let (c2, b) = cli(args)?;
        ensure(c1 == 0 && c2 == 0 && a == b && !a.is_empty(), || format!("{args:?} differs between runs"))?;
        let v: serde_json::Value = ok(serde_json::from_str(&a))?;
        let back: serde_json::Value = ok(serde_json::from_str(&ok(serde_json::to_string(&v))?))?;
        ensure(back == v && v["command"].is_string() && v["status"].is_string(), || format!("{args:?} does not round-trip"))?;
    }
    let matrix: [(&[&str], i32); 15] = [
        (&["converge", "p-series", "--p", "2"], 0),
        (&["converge", "geometric", "--r", "1"], 0),
        (&["converge", "p-series", "--p", "2", "--policy", "ratio"], 2),
        (&["converge", "p-series"], 1),
        (&["converge", "hyperharmonic", "--p", "2"], 1),
        (&["integrate", "poly:x^2", "1", "4", "--width", "1e-3"], 0),
        (&["integrate", "gallery:dirichlet", "0", "1"], 2),
        (&["integrate", "poly:x^2 + sin(x)", "0", "1"], 1),
        (&["integrate", "poly:x^2", "1", "inf"], 1),
        (&["integrate", "improper:x^-2", "1", "inf"], 0),
        (&["constants", "ln2", "--digits", "6"], 2),
        (&["constants", "e", "--digits", "15"], 0),
        (&["taylor", "sin", "--order", "3", "--at", "0", "--x", "1/2"], 0),
        (&["rearrange", "alt-harmonic"], 1),
        (&["frobnicate"], 1),
    ];
    for (args, want) in matrix {
        let (code, _) = cli(args)?;
        ensure(code == want, || format!("{args:?}: exit {code}, expected {want}"))?;
    }
    Ok("4 commands byte-identical and round-trip; 15-invocation exit matrix".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 16] = [
        ("Darboux golden table", c01_darboux_table),
        ("integral golden values", c02_integral_values),
        ("monotone shrinkage law", c03_monotone_gap),
        ("refinement monotonicity", c04_refinement),
        ("series classification table", c05_series_table),
        ("constants", c06_constants),
        ("rearrangement", c07_rearrangement),
        ("infinite products", c08_products),
        ("power series", c09_power_series),
        ("Taylor bounds", c10_taylor),
        ("Bernstein", c11_bernstein),
        ("uniform convergence", c12_uniform),
        ("nowhere-differentiable parity", c13_parity),
        ("bisection", c14_bisection),
        ("Gamma", c15_gamma),
        ("CLI determinism", c16_cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
