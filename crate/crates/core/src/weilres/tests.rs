use std::sync::Arc;

use super::*;
use crate::algebra::{galois_group, BaseField, EtaleAlgebra, DEFAULT_HEIGHT_BOUND};
use crate::poly::{parse_poly, PolyRing, DEFAULT_DEGREE_CAP as CAP};
use crate::scheme::{distinguished_open, AffineScheme, Morphism};

fn gf(p: u64) -> BaseField {
    BaseField::prime(p).unwrap()
}

fn algebra(k: BaseField, f: &[i64]) -> Arc<EtaleAlgebra> {
    Arc::new(EtaleAlgebra::new(k, f.iter().map(|&c| k.from_i64(c)).collect()).unwrap())
}

fn f4() -> Arc<EtaleAlgebra> {
    algebra(gf(2), &[1, 1, 1])
}

fn gaussian() -> Arc<EtaleAlgebra> {
    algebra(BaseField::Rationals, &[1, 0, 1])
}

fn scheme(coef: &Arc<EtaleAlgebra>, vars: &[&str], gens: &[&str]) -> Arc<AffineScheme> {
    let ring = PolyRing::new(coef.clone(), vars.iter().map(|v| v.to_string()).collect());
    let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
    Arc::new(AffineScheme::new(ring, gens).unwrap())
}

#[test]
fn affine_line_restricts_to_plane() {
    let r = restrict_scheme(&scheme(&f4(), &["x"], &[]), CAP).unwrap();
    assert_eq!(r.scheme().vars(), ["x_0", "x_1"]);
    assert!(r.scheme().generators().is_empty());
    let pt = restrict_scheme(&scheme(&f4(), &[], &[]), CAP).unwrap();
    assert_eq!(pt.scheme().nvars(), 0);
}

#[test]
fn multiplicative_group_over_f4() {
    let r = restrict_scheme(&scheme(&f4(), &["x", "y"], &["x*y - 1"]), CAP).unwrap();
    assert_eq!(r.scheme().vars(), ["x_0", "x_1", "y_0", "y_1"]);
    assert_eq!(
        r.scheme().display_generators(),
        ["x_0*y_0 + x_1*y_1 + 1", "x_1*y_0 + x_0*y_1 + x_1*y_1"]
    );
    assert!(r.pruned().is_empty());
}

#[test]
fn squaring_map_restricts_componentwise() {
    let line = scheme(&f4(), &["x"], &[]);
    let sq = Morphism::new(line.clone(), line.clone(), vec![parse_poly(line.ring(), "x^2").unwrap()], CAP)
        .unwrap();
    let r = restrict_scheme(&line, CAP).unwrap();
    let rs = restrict_morphism(&sq, &r, &r, CAP).unwrap();
    assert_eq!(rs.display_images(), ["x_0^2 + x_1^2", "x_1^2"]);
}

#[test]
fn restriction_is_functorial() {
    let line = scheme(&f4(), &["x"], &[]);
    let p = |s: &str| parse_poly(line.ring(), s).unwrap();
    let f = Morphism::new(line.clone(), line.clone(), vec![p("x^2 + t*x")], CAP).unwrap();
    let g = Morphism::new(line.clone(), line.clone(), vec![p("(t + 1)*x^3 + 1")], CAP).unwrap();
    let r = restrict_scheme(&line, CAP).unwrap();
    let composite = restrict_morphism(&f.then(&g).unwrap(), &r, &r, CAP).unwrap();
    let stepwise = restrict_morphism(&f, &r, &r, CAP)
        .unwrap()
        .then(&restrict_morphism(&g, &r, &r, CAP).unwrap())
        .unwrap();
    assert!(composite.differences(&stepwise, CAP).unwrap().is_empty());
}

#[test]
fn counit_of_the_line() {
    let r = restrict_scheme(&scheme(&f4(), &["x"], &[]), CAP).unwrap();
    let c = counit(&r, CAP).unwrap();
    assert_eq!(c.display_images(), ["x_0 + (t)*x_1"]);
}

#[test]
fn triangle_identities_hold() {
    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    let k2 = Arc::new(EtaleAlgebra::trivial(gf(2)));
    let y = scheme(&k2, &["u"], &[]);
    let rep = triangle_identities(&gm, &y, CAP).unwrap();
    assert!(rep.verified(), "{rep:?}");

    let f25 = algebra(gf(5), &[2, 0, 1]);
    let k5 = Arc::new(EtaleAlgebra::trivial(gf(5)));
    let curve = scheme(&k5, &["x", "y"], &["y^2 - x^3 - x"]);
    let circle = scheme(&f25, &["x", "y"], &["x^2 + y^2 - 1"]);
    assert!(triangle_identities(&circle, &curve, CAP).unwrap().verified());

    let plane = scheme(&gaussian(), &["x", "y"], &[]);
    let kq = Arc::new(EtaleAlgebra::trivial(BaseField::Rationals));
    assert!(triangle_identities(&plane, &scheme(&kq, &[], &[]), CAP).unwrap().verified());
}

#[test]
fn norms_of_the_coordinate() {
    let line = scheme(&f4(), &["x"], &[]);
    let (n, rep) = restrict_open(&line, &line.var(0), CAP).unwrap();
    assert_eq!(n.to_string(), "x_0^2 + x_0*x_1 + x_1^2");
    assert!(rep.verified(), "{rep:?}");

    let line = scheme(&gaussian(), &["x"], &[]);
    let (n, rep) = restrict_open(&line, &line.var(0), CAP).unwrap();
    assert_eq!(n.to_string(), "x_0^2 + x_1^2");
    assert!(rep.verified());

    let (n, rep) = restrict_open(&line, &parse_poly(line.ring(), "1").unwrap(), CAP).unwrap();
    assert!(n.is_one());
    assert!(rep.verified());
}

#[test]
fn base_change_comparisons() {
    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    let k2 = Arc::new(EtaleAlgebra::trivial(gf(2)));
    let line = scheme(&k2, &["u"], &[]);
    assert!(base_change_compat(&gm, &line, CAP).unwrap().verified());
    let point = scheme(&k2, &[], &[]);
    assert!(base_change_compat(&gm, &point, CAP).unwrap().verified());

    let kq = Arc::new(EtaleAlgebra::trivial(BaseField::Rationals));
    let uline = scheme(&kq, &["u"], &[]);
    let (open, _) = distinguished_open(&uline, &uline.var(0)).unwrap();
    let x = scheme(&gaussian(), &["x"], &[]);
    let rep = base_change_compat(&x, &open, CAP).unwrap();
    assert!(rep.verified(), "{rep:?}");

    let curve = scheme(&k2, &["u", "v"], &["u*v - 1"]);
    assert!(base_change_compat(&gm, &curve, CAP).is_err());
}

#[test]
fn fiber_product_comparisons() {
    let l = f4();
    let line = scheme(&l, &["x"], &[]);
    let pt = scheme(&l, &[], &[]);
    let to_pt = Morphism::new(line.clone(), pt.clone(), vec![], CAP).unwrap();
    let rep = fiber_product_compat(&to_pt, &to_pt, CAP).unwrap();
    assert!(rep.verified());
    assert_eq!(rep.left_vars, 4);

    let gm = scheme(&l, &["x", "y"], &["x*y - 1"]);
    let id = Morphism::identity(&gm);
    assert!(fiber_product_compat(&id, &id, CAP).unwrap().verified());

    let (dx, incl) = distinguished_open(&line, &line.var(0)).unwrap();
    let _ = dx;
    let c = scheme(&l, &["x"], &["x - t"]);
    let c_incl = Morphism::new(c.clone(), line.clone(), vec![c.var(0)], CAP).unwrap();
    assert!(fiber_product_compat(&incl, &c_incl, CAP).unwrap().verified());
}

#[test]
fn galois_split_of_multiplicative_group() {
    let l = f4();
    let g = galois_group(&l, DEFAULT_HEIGHT_BOUND).unwrap();
    let gm = scheme(&l, &["x", "y"], &["x*y - 1"]);
    let rep = galois_decomposition(&gm, &g, CAP).unwrap();
    assert!(rep.verified(), "{rep:?}");
    assert_eq!(rep.twists[0], rep.twists[1]);

    let twisted = scheme(&l, &["x", "y"], &["y^2 - t*x"]);
    let rep = galois_decomposition(&twisted, &g, CAP).unwrap();
    assert!(rep.verified());
    assert_eq!(rep.twists[1], ["y^2 + (t + 1)*x"]);

    let q = gaussian();
    let g = galois_group(&q, DEFAULT_HEIGHT_BOUND).unwrap();
    let circle = scheme(&q, &["x", "y"], &["x^2 + y^2 - 1"]);
    assert!(galois_decomposition(&circle, &g, CAP).unwrap().verified());
}

#[test]
fn affine_shadow_presentations_agree() {
    let gm = scheme(&f4(), &["x", "y"], &["x*y - 1"]);
    for n in 0..=2 {
        let rep = affine_shadow(&gm, n, CAP).unwrap();
        assert!(rep.verified(), "{rep:?}");
        assert_eq!(rep.vars.len(), 4 + 2 * n);
    }
}

#[test]
fn etale_covers_stay_etale() {
    use crate::scheme::{extended_ring, is_etale_morphism, relative_presentation, relative_scheme};
    let f25 = algebra(gf(5), &[2, 0, 1]);
    let gm = scheme(&f25, &["x", "y"], &["x*y - 1"]);
    let ring = extended_ring(&gm, &["z".into()]);
    let rel = parse_poly(&ring, "z^2 - x").unwrap();
    let (cover, _) = relative_scheme(&gm, &["z".into()], vec![rel]).unwrap();
    let rc = restrict_relative(&cover, CAP).unwrap();
    assert_eq!(rc.vars(), ["x_0", "x_1", "y_0", "y_1", "z_0", "z_1"]);
    let (_, s, rel) = relative_presentation(&rc).unwrap();
    assert_eq!(s, 2);
    assert_eq!(rel.len(), 2);
    let rep = is_etale_morphism(&rc, CAP).unwrap();
    assert!(rep.etale, "{rep:?}");
    // same presentation as restricting the cover outright
    let direct = restrict_scheme(&cover, CAP).unwrap();
    assert_eq!(direct.scheme().display_generators(), rc.display_generators());
}
