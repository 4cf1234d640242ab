mod common;

use common::{interval_solid_sum, random_lattice_polytope, rng};
use solidangle::angle::AngleEngine;
use solidangle::families::Family;
use solidangle::polytope::Polytope;
use solidangle::rational::frac;
use solidangle::solidpoly::{fit_solid, numerator, period_report, SolidAngleSum, SolidFit};

fn pieces(p: &Polytope) -> Vec<Polytope> {
    p.triangulate()
        .iter()
        .map(|s| Polytope::new(s.iter().map(|&i| p.vertices()[i].clone()).collect()).unwrap())
        .collect()
}

#[test]
fn solid_angle_sum_adds_over_triangulations() {
    let e = AngleEngine::default();
    let mut r = rng(21);
    for i in 0..12 {
        let d = 2 + i % 2;
        let p = random_lattice_polytope(&mut r, d, d + 3, 2);
        let whole = SolidAngleSum::new(&p, &e).unwrap();
        let parts: Vec<Polytope> = pieces(&p);
        for t in 1..=3 {
            let sum: f64 = parts
                .iter()
                .map(|s| SolidAngleSum::new(s, &e).unwrap().eval(t).value)
                .sum();
            assert!((whole.eval(t).value - sum).abs() < 1e-9, "{:?} at t={t}", p.vertices());
        }
    }
}

#[test]
fn numerators_add_over_triangulations() {
    let e = AngleEngine::default();
    let p = Family::CrossPolytope { d: 3 }.build().unwrap();
    let whole = numerator(&p, &e).unwrap().numerator.values();
    let mut sum = vec![0.0; whole.len()];
    for s in pieces(&p) {
        for (acc, x) in sum.iter_mut().zip(numerator(&s, &e).unwrap().numerator.values()) {
            *acc += x;
        }
    }
    for (a, b) in whole.iter().zip(&sum) {
        assert!((a - b).abs() < 1e-9, "{whole:?} vs {sum:?}");
    }
}

#[test]
fn faces_and_lattice_points_agree() {
    let e = AngleEngine::default();
    let p = Family::Reeve { h: 5 }.build().unwrap();
    let s = SolidAngleSum::new(&p, &e).unwrap();
    for t in 1..=4 {
        assert!((s.eval(t).value - s.eval_by_faces(t).value).abs() < 1e-9);
    }
}

#[test]
fn interval_sums_match_direct_count() {
    let e = AngleEngine::default();
    for (a, b) in [((1, 3), (4, 3)), ((0, 1), (1, 3)), ((-1, 2), (5, 4))] {
        let p = Family::Interval { a: frac(a.0, a.1), b: frac(b.0, b.1) }.build().unwrap();
        let s = SolidAngleSum::new(&p, &e).unwrap();
        for t in 1..=12 {
            assert!((s.eval(t).value - interval_solid_sum(a, b, t)).abs() < 1e-12, "{a:?} {b:?} t={t}");
        }
    }
}

#[test]
fn rational_polytopes_get_quasipolynomials() {
    let e = AngleEngine::default();
    let p = Family::Interval { a: frac(0, 1), b: frac(1, 3) }.build().unwrap();
    match fit_solid(&p, &e).unwrap() {
        SolidFit::Quasipolynomial(q) => {
            assert_eq!(q.declared_period, 3);
            for t in 1..=9 {
                assert!((q.full.eval(t) - interval_solid_sum((0, 1), (1, 3), t)).abs() < 1e-9);
            }
        }
        SolidFit::Polynomial(_) => panic!("expected a quasipolynomial"),
    }
    let r = period_report(&p, &e).unwrap();
    assert!(!r.collapsed);
    assert!(r.ok());
}
