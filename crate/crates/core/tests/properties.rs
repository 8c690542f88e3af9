use std::sync::Arc;

use proptest::prelude::*;
use weilkit::algebra::{AlgElem, BaseField, EtaleAlgebra};
use weilkit::points::{
    adjunction_bijection, enumerate_points, evaluate_generators, pack, tensor_point_ring, unpack, FiniteRing,
    PointRing, TestAlgebra,
};
use weilkit::poly::{groebner, parse_modulus, parse_poly, Poly, PolyRing};
use weilkit::scheme::AffineScheme;
use weilkit::weilres::restrict_scheme;
use weilkit::{Config, Strategy as Threads};

const CAP: u32 = 40;

fn f4_over_f2() -> Arc<EtaleAlgebra> {
    let k = BaseField::prime(2).unwrap();
    Arc::new(EtaleAlgebra::new(k, parse_modulus(k, "t^2 + t + 1").unwrap()).unwrap())
}

fn f25_over_f5() -> Arc<EtaleAlgebra> {
    let k = BaseField::prime(5).unwrap();
    Arc::new(EtaleAlgebra::new(k, parse_modulus(k, "t^2 + 2").unwrap()).unwrap())
}

/// A polynomial in `x, y` with coefficients in `{1, t, t + 1}`.
fn poly_text() -> impl Strategy<Value = String> {
    let coef = prop::sample::select(vec!["1", "t", "(t + 1)"]);
    let term = (coef, 0u32..3, 0u32..3).prop_map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"));
    prop::collection::vec(term, 1..4).prop_map(|ts| ts.join(" + "))
}

fn scheme(l: &Arc<EtaleAlgebra>, gens: &[String]) -> Arc<AffineScheme> {
    let ring = PolyRing::new(l.clone(), vec!["x".into(), "y".into()]);
    let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
    Arc::new(AffineScheme::new(ring, gens).unwrap())
}

fn rings() -> Vec<FiniteRing> {
    vec![
        FiniteRing::finite_field(2, 2).unwrap(),
        FiniteRing::finite_field(3, 2).unwrap(),
        FiniteRing::finite_field(2, 3).unwrap(),
        FiniteRing::finite_field(5, 1).unwrap().dual_numbers().unwrap(),
        FiniteRing::from_etale(&f4_over_f2()).unwrap(),
        FiniteRing::finite_field(2, 2).unwrap().tensor(&FiniteRing::from_etale(&f4_over_f2()).unwrap(), "F4 ⊗ F4").unwrap(),
    ]
}

/// Every element of `l`, by coordinates.
fn elements(l: &EtaleAlgebra) -> Vec<AlgElem> {
    let k = l.base();
    let scalars = k.elements().unwrap();
    let mut out = vec![Vec::new()];
    for _ in 0..l.degree() {
        out = out
            .into_iter()
            .flat_map(|c: Vec<_>| scalars.iter().map(move |s| [c.clone(), vec![s.clone()]].concat()))
            .collect();
    }
    out.iter().map(|c| l.from_coeffs(c)).collect()
}

/// `|X(L)|` with the algebra's own arithmetic, by trying every pair.
fn count_over_l(l: &EtaleAlgebra, x: &AffineScheme) -> usize {
    let els = elements(l);
    let eval = |p: &Poly, pt: &[&AlgElem]| {
        p.terms().iter().fold(l.zero(), |acc, (exp, c)| {
            let m = exp.iter().zip(pt).fold(c.clone(), |m, (&e, v)| l.mul(&m, &l.pow(v, e as u64)));
            l.add(&acc, &m)
        })
    };
    els.iter()
        .flat_map(|a| els.iter().map(move |b| [a, b]))
        .filter(|pt| x.generators().iter().all(|g| l.is_zero(&eval(g, pt))))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_rings_are_commutative_rings(i in 0usize..6, a in 0u32..4096, b in 0u32..4096, c in 0u32..4096) {
        let r = &rings()[i];
        let n = r.size();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
        prop_assert_eq!(r.from_coords(&r.coords(a)), a);
    }

    #[test]
    fn parallel_and_sequential_enumeration_agree(gens in prop::collection::vec(poly_text(), 1..3), q in 0usize..3) {
        let x = scheme(&f4_over_f2(), &gens);
        let a = TestAlgebra::field([2, 4, 8][q]).unwrap().build(x.coef()).unwrap();
        let pr = tensor_point_ring(&a, x.coef()).unwrap();
        let seq = enumerate_points(&x, &pr, u64::MAX, Threads::Sequential).unwrap();
        let par = enumerate_points(&x, &pr, u64::MAX, Threads::Parallel).unwrap();
        prop_assert_eq!(&seq, &par);
        let size = pr.ring().size();
        let brute = (0..size)
            .flat_map(|u| (0..size).map(move |v| [u, v]))
            .filter(|p| evaluate_generators(&x, &pr, p).iter().all(|&e| e == 0))
            .count();
        prop_assert_eq!(seq.len(), brute);
        prop_assert!(seq.points.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn restriction_counts_match_points_over_l(gens in prop::collection::vec(poly_text(), 1..3)) {
        let l = f4_over_f2();
        let x = scheme(&l, &gens);
        let f2 = Arc::new(FiniteRing::finite_field(2, 1).unwrap());
        let rep = adjunction_bijection(&x, &f2, &Config::default()).unwrap();
        prop_assert!(rep.verified(), "{:?}", rep.checks);
        prop_assert_eq!(rep.left, count_over_l(&l, &x));
    }

    #[test]
    fn adjunction_holds_over_larger_fields(gens in prop::collection::vec(poly_text(), 1..3), s in 2u32..4) {
        let x = scheme(&f4_over_f2(), &gens);
        let a = Arc::new(FiniteRing::finite_field(2, s).unwrap());
        let rep = adjunction_bijection(&x, &a, &Config::default()).unwrap();
        prop_assert!(rep.verified(), "{:?}", rep.checks);
    }

    #[test]
    fn pack_and_unpack_are_inverse(alpha in prop::collection::vec(0u32..25, 4)) {
        let x = scheme(&f25_over_f5(), &["x*y - 1".to_string()]);
        let r = restrict_scheme(&x, CAP).unwrap();
        let packed = pack(&r, 25, &alpha);
        prop_assert!(packed.iter().all(|&e| e < 625));
        prop_assert_eq!(unpack(&r, 25, &packed), alpha);
    }

    #[test]
    fn normal_forms_are_linear_and_idempotent(
        gens in prop::collection::vec(poly_text(), 1..3),
        f in poly_text(),
        g in poly_text(),
    ) {
        let x = scheme(&f4_over_f2(), &gens);
        let ring = x.ring();
        let gb = groebner(ring, x.generators(), CAP).unwrap();
        let (f, g) = (parse_poly(ring, &f).unwrap(), parse_poly(ring, &g).unwrap());
        let nf = |p: &Poly| gb.normal_form(p);
        prop_assert_eq!(nf(&(&f + &g)), &nf(&f) + &nf(&g));
        prop_assert_eq!(nf(&nf(&f)), nf(&f));
        for h in x.generators() {
            prop_assert!(gb.contains(&(&f * h)));
        }
    }

    #[test]
    fn pruning_keeps_an_irredundant_generating_set(gens in prop::collection::vec(poly_text(), 1..4)) {
        let x = scheme(&f4_over_f2(), &gens);
        let r = restrict_scheme(&x, CAP).unwrap();
        let kept = r.scheme().generators();
        let k_ring = r.scheme().ring();
        let gb = groebner(k_ring, kept, CAP).unwrap();
        for c in r.components().iter().flatten() {
            prop_assert!(gb.contains(c), "dropped component {} outside the ideal", c);
        }
        if kept.len() > 1 {
            for i in 0..kept.len() {
                let others: Vec<Poly> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
                prop_assert!(!groebner(k_ring, &others, CAP).unwrap().contains(&kept[i]), "{} is redundant", kept[i]);
            }
        }
    }
}

#[test]
fn point_rings_reject_non_roots() {
    let l = f4_over_f2();
    let f4 = Arc::new(FiniteRing::finite_field(2, 2).unwrap());
    // t^2 + t + 1 has exactly the two elements outside F2 as roots
    let roots: Vec<u32> = f4.elements().filter(|&e| PointRing::new(f4.clone(), l.clone(), e).is_ok()).collect();
    assert_eq!(roots.len(), 2);
    assert!(!roots.contains(&f4.zero()) && !roots.contains(&f4.one()));
}

#[test]
fn graph_components_are_kept_without_leave_one_out_bases() {
    let x = scheme(&f4_over_f2(), &["y - x^3 - t*x".to_string()]);
    let rx = restrict_scheme(&x, CAP).unwrap();
    let twice = restrict_scheme(&rx.base_changed().unwrap(), CAP).unwrap();
    let kept = twice.scheme().generators();
    assert_eq!(kept.len(), 4);
    assert!(twice.pruned().is_empty());
    let k_ring = twice.scheme().ring();
    for i in 0..kept.len() {
        let others: Vec<Poly> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        assert!(!groebner(k_ring, &others, CAP).unwrap().contains(&kept[i]));
    }
}
