use std::sync::Arc;

use super::*;
use crate::algebra::{BaseField, EtaleAlgebra};
use crate::bundle::make_bundle;
use crate::poly::{parse_poly, PolyRing};

fn gf(p: u64) -> BaseField {
    BaseField::prime(p).unwrap()
}

fn algebra(k: BaseField, f: &[i64]) -> Arc<EtaleAlgebra> {
    Arc::new(EtaleAlgebra::new(k, f.iter().map(|&c| k.from_i64(c)).collect()).unwrap())
}

fn f4() -> Arc<EtaleAlgebra> {
    algebra(gf(2), &[1, 1, 1])
}

fn scheme(coef: &Arc<EtaleAlgebra>, vars: &[&str], gens: &[&str]) -> Arc<AffineScheme> {
    let ring = PolyRing::new(coef.clone(), vars.iter().map(|v| v.to_string()).collect());
    let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
    Arc::new(AffineScheme::new(ring, gens).unwrap())
}

fn ring(p: u64, s: u32) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::finite_field(p, s).unwrap())
}

fn dual(p: u64) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::prime_field(p).unwrap().dual_numbers().unwrap())
}

fn over_l(l: &Arc<EtaleAlgebra>) -> PointRing {
    let r = Arc::new(FiniteRing::from_etale(l).unwrap());
    PointRing::new(r.clone(), l.clone(), r.basis_index(1)).unwrap()
}

fn circle_bundle(cfg: &Config) -> Bundle {
    let l = algebra(gf(5), &[2, 0, 1]);
    let circle = scheme(&l, &["x", "y"], &["x^2 + y^2 - 1"]);
    let p = |s: &str| parse_poly(circle.ring(), s).unwrap();
    let m = vec![vec![p("3 + 3*x"), p("3*y")], vec![p("3*y"), p("3 - 3*x")]];
    make_bundle(&circle, m, 1, cfg).unwrap()
}

#[test]
fn class_sets() {
    let cfg = Config::default();
    let line = scheme(&f4(), &["x"], &[]);
    let pres = ThomPresentation::new(line.clone(), vec![line.var(0)]).unwrap();
    let c = thom_points(&pres, &over_l(&f4()), &cfg).unwrap();
    assert_eq!((c.class_count(), c.collapsed.len()), (2, 3));

    let pt = scheme(&f4(), &[], &[]);
    let c = thom_points(&ThomPresentation::new(pt, vec![]).unwrap(), &over_l(&f4()), &cfg).unwrap();
    assert_eq!(c.class_count(), 2);

    let one = parse_poly(line.ring(), "1").unwrap();
    let c = thom_points(&ThomPresentation::new(line.clone(), vec![one]).unwrap(), &over_l(&f4()), &cfg).unwrap();
    assert_eq!((c.class_count(), c.collapsed.len()), (1, 4));

    let split = Arc::new(ring(2, 2).tensor(&ring(2, 2), "split").unwrap());
    let pr = PointRing::new(split.clone(), f4(), split.basis_index(2)).unwrap();
    assert_eq!(thom_points(&pres, &pr, &cfg).unwrap_err(), Error::NotLocalAlgebra);
}

#[test]
fn fiberwise_points_match_generic_enumeration() {
    let cfg = Config::default();
    let e = circle_bundle(&cfg);
    let ts = total_space(&e, &cfg).unwrap();
    let pr = over_l(e.base().coef());
    let fast = bundle_points(&e, &ts.scheme, &pr, &cfg).unwrap();
    let generic = enumerate_points(&ts.scheme, &pr, cfg.point_budget, cfg.strategy).unwrap();
    assert_eq!(fast.points, generic.points);
}

#[test]
fn thom_comparisons() {
    let cfg = Config::default();
    let pt = scheme(&f4(), &[], &[]);
    let rep = thom_compare(&Bundle::free(&pt, 1), &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified(), "{rep:?}");
    assert_eq!((rep.restricted_classes, rep.classes), (2, 2));

    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    let rep = thom_compare(&Bundle::free(&gm, 1), &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!((rep.restricted_classes, rep.classes), (4, 4));

    let rep = thom_compare(&circle_bundle(&cfg), &dual(5), &cfg).unwrap();
    assert!(rep.verified(), "{rep:?}");
    // 600 points of the circle over F25[eps], each with 25 nilpotent fiber vectors
    assert_eq!(rep.classes, 600 * 25 + 1);

    let err = thom_compare(&Bundle::free(&gm, 1), &ring(2, 2), &cfg).unwrap_err();
    assert_eq!(err, Error::NonLocalTensor);
}

#[test]
fn complement_equivalence() {
    let cfg = Config::default();
    let pt = scheme(&f4(), &[], &[]);
    let rep = step2_check(&Bundle::free(&pt, 1), &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!((rep.points, rep.complement), (4, 3));

    let rep = step2_check(&Bundle::free(&pt, 1), &dual(2), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!((rep.points, rep.complement), (16, 12));

    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    let zero = make_bundle(&gm, vec![vec![parse_poly(gm.ring(), "0").unwrap()]], 0, &cfg).unwrap();
    let rep = step2_check(&zero, &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!(rep.complement, 0);

    assert!(step2_check(&circle_bundle(&cfg), &dual(5), &cfg).unwrap().verified());
}

#[test]
fn naturality() {
    let cfg = Config::default();
    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    let e = Bundle::free(&gm, 1);
    assert!(thom_naturality(&e, &dual(2), &cfg).unwrap().verified());
    assert!(thom_naturality(&e, &ring(2, 3), &cfg).unwrap().verified());
    assert!(thom_naturality(&circle_bundle(&cfg), &dual(5), &cfg).unwrap().verified());
}

#[test]
fn gysin_counts() {
    let cfg = Config::default();
    let plane = scheme(&f4(), &["x", "y"], &[]);
    let y = parse_poly(plane.ring(), "y").unwrap();
    let rep = gysin_shadow(&plane, &[y], &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified(), "{rep:?}");
    assert_eq!((rep.normal_classes, rep.quotient_classes), (5, 5));

    let rep = gysin_shadow(&plane, &[], &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!(rep.quotient_classes, 17);

    let one = parse_poly(plane.ring(), "1").unwrap();
    let rep = gysin_shadow(&plane, &[one], &ring(2, 1), &cfg).unwrap();
    assert!(rep.verified());
    assert_eq!((rep.normal_classes, rep.quotient_classes), (1, 1));
}
