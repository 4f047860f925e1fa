use super::*;
use crate::function::{CellRange, Direction, Piece};
use crate::rational::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn parabola() -> FnDescriptor {
    FnDescriptor::polynomial(Poly::from_ints(&[0, 6, -1]))
}

#[test]
fn darboux_worked_example() {
    let p = Partition::new(ints(&[0, 2, 3, 5, 6])).unwrap();
    let d = darboux(&parabola(), &p).unwrap();
    assert_eq!(d.lower, int(18));
    assert_eq!(d.upper, int(48));
    assert!(d.exact);
    let r = riemann_sum(&parabola(), &p, &Pick::Custom(ints(&[1, 3, 4, 5]))).unwrap();
    assert_eq!(r, int(40));
    assert!(d.enclosure().unwrap().contains(&r));
}

#[test]
fn pick_outside_cell_is_rejected() {
    let p = Partition::new(ints(&[0, 2, 3])).unwrap();
    let err = riemann_sum(&parabola(), &p, &Pick::Custom(ints(&[1, 4]))).unwrap_err();
    assert!(matches!(err, Error::PickOutsideCell { .. }));
    assert!(riemann_sum(&parabola(), &p, &Pick::Custom(ints(&[1]))).is_err());
}

#[test]
fn regular_right_sums_match_closed_form() {
    // right sums of 6x − x² on [0, 6] equal 36(n² − 1)/n²
    for n in 1..=12i64 {
        let p = Partition::regular(&int(0), &int(6), n as u64).unwrap();
        let r = riemann_sum(&parabola(), &p, &Pick::Right).unwrap();
        assert_eq!(r, int(36) * int(n * n - 1) / int(n * n));
    }
}

#[test]
fn partition_validation() {
    assert!(Partition::new(ints(&[0])).is_err());
    assert!(Partition::new(ints(&[0, 1, 1])).is_err());
    assert!(Partition::regular(&int(1), &int(1), 3).is_err());
    let p = Partition::regular(&int(0), &int(1), 4).unwrap();
    assert_eq!(p.gap(), rat(1, 4));
    let q = p.refine(&[rat(1, 3), int(5)]);
    assert_eq!(q.cells(), 5);
    assert!(q.is_refinement_of(&p));
    assert!(!p.is_refinement_of(&q));
}

#[test]
fn monotone_gap_identity() {
    let f = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
    for k in 1..=64u64 {
        let p = Partition::regular(&int(1), &int(4), k).unwrap();
        let d = darboux(&f, &p).unwrap();
        assert_eq!(d.gap(), monotone_gap(&f, &int(1), &int(4), k).unwrap());
        assert_eq!(d.gap(), int(45) / int(k as i64));
    }
}

#[test]
fn closed_form_matches_cellwise() {
    let f = Poly::from_ints(&[1, -2, 0, 1]);
    let (a, b) = (int(1), int(3));
    for k in [1u64, 2, 7, 16] {
        let (lo, hi) = poly_darboux_regular(&f, &a, &b, k).unwrap();
        let d = darboux(&FnDescriptor::polynomial(f.clone()), &Partition::regular(&a, &b, k).unwrap()).unwrap();
        assert_eq!((lo, hi), (d.lower, d.upper));
    }
    let dec = Poly::from_ints(&[0, 0, -1]);
    let (lo, hi) = poly_darboux_regular(&dec, &int(0), &int(2), 4).unwrap();
    assert!(lo < hi);
    assert!(poly_darboux_regular(&Poly::from_ints(&[0, 0, 1]), &int(-1), &int(1), 4).is_err());
}

#[test]
fn refinement_is_monotone() {
    let f = parabola();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let mut pts: Vec<Rational> = (0..rng.gen_range(1..6)).map(|_| rat(rng.gen_range(1..600), 100)).collect();
        pts.push(int(0));
        pts.push(int(6));
        pts.sort();
        pts.dedup();
        let coarse = Partition::new(pts).unwrap();
        let extra: Vec<Rational> = (0..rng.gen_range(1..6)).map(|_| rat(rng.gen_range(1..6000), 1000)).collect();
        let fine = coarse.refine(&extra);
        let (c, r) = (darboux(&f, &coarse).unwrap(), darboux(&f, &fine).unwrap());
        assert!(c.lower <= r.lower && r.lower <= r.upper && r.upper <= c.upper);
    }
}

#[test]
fn polynomial_integrals() {
    let w = rational::ten_pow_neg(6);
    let x2 = FnDescriptor::polynomial(Poly::from_ints(&[0, 0, 1]));
    let r = integrate_enclosure(&x2, &int(1), &int(4), &w).unwrap();
    assert!(r.met && r.exact && r.enclosure.contains(&int(21)) && r.enclosure.width() <= w);
    let r = integrate_enclosure(&parabola(), &int(0), &int(6), &w).unwrap();
    assert!(r.met && r.enclosure.contains(&int(36)) && r.enclosure.width() <= w);
}

fn step5() -> FnDescriptor {
    let piece = |from: Rational, to: Rational, v: i64| Piece { from, to, func: FnDescriptor::constant(int(v)) };
    let pieces = alloc::vec![
        piece(int(0), int(1), 1),
        piece(int(1), rat(5, 4), 4),
        piece(rat(5, 4), rat(5, 3), 3),
        piece(rat(5, 3), rat(5, 2), 2),
        piece(rat(5, 2), int(5), 1),
    ];
    FnDescriptor::exact("step5", |x| {
        Ok(int(if *x <= int(1) {
            1
        } else if *x <= rat(5, 4) {
            4
        } else if *x <= rat(5, 3) {
            3
        } else if *x <= rat(5, 2) {
            2
        } else {
            1
        }))
    })
    .with_pieces(pieces)
}

#[test]
fn step_function_is_exact() {
    let r = integrate_enclosure(&step5(), &int(0), &int(5), &rational::ten_pow_neg(9)).unwrap();
    assert_eq!(r.enclosure, Enclosure::point(rat(89, 12)));
    let d = darboux(&step5(), &Partition::new(ints(&[0, 2, 5])).unwrap()).unwrap();
    assert_eq!((d.lower, d.upper), (int(2 + 3), int(8 + 6)));
}

#[test]
fn dirichlet_never_closes() {
    let f = FnDescriptor::exact("dirichlet", |_| Ok(int(1)))
        .with_range(|a, b| Ok(if a == b { CellRange::exact(int(1), int(1)) } else { CellRange::exact(int(0), int(1)) }))
        .rational_points_only();
    for k in [1u64, 10, 100] {
        let d = darboux(&f, &Partition::regular(&int(0), &int(1), k).unwrap()).unwrap();
        assert_eq!((d.lower, d.upper), (int(0), int(1)));
    }
    let r = integrate_enclosure(&f, &int(0), &int(1), &rat(1, 2)).unwrap();
    assert!(!r.met);
    assert_eq!(r.cells, CELL_CAP);
}

#[test]
fn monotone_claims_drive_generic_integrands() {
    let f = FnDescriptor::exact("1/x", rational::recip).with_monotone(Direction::Decreasing, Some(rat(1, 1000)), None);
    let r = integrate_enclosure(&f, &int(1), &int(2), &rat(1, 100)).unwrap();
    assert!(r.met);
    assert!(r.enclosure.contains(&rat(693147, 1000000)));
}
