use std::sync::Arc;

use super::*;
use crate::algebra::{BaseField, EtaleAlgebra};
use crate::error::Error;
use crate::poly::{parse_poly, PolyRing, DEFAULT_DEGREE_CAP as CAP};

fn gf(p: u64) -> BaseField {
    BaseField::prime(p).unwrap()
}

fn field(k: BaseField) -> Arc<EtaleAlgebra> {
    Arc::new(EtaleAlgebra::trivial(k))
}

fn algebra(k: BaseField, f: &[i64]) -> Arc<EtaleAlgebra> {
    Arc::new(EtaleAlgebra::new(k, f.iter().map(|&c| k.from_i64(c)).collect()).unwrap())
}

fn scheme(coef: &Arc<EtaleAlgebra>, vars: &[&str], gens: &[&str]) -> Arc<AffineScheme> {
    let ring = PolyRing::new(coef.clone(), vars.iter().map(|v| v.to_string()).collect());
    let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
    Arc::new(AffineScheme::new(ring, gens).unwrap())
}

#[test]
fn smooth_examples() {
    let f4 = algebra(gf(2), &[1, 1, 1]);
    let gm = scheme(&f4, &["x", "y"], &["x*y - 1"]);
    let rep = is_smooth(&gm, 1, CAP).unwrap();
    assert!(rep.smooth);
    assert_eq!(rep.certificate, ["1"]);
    let q = field(BaseField::Rationals);
    let a3 = scheme(&q, &["x", "y", "z"], &[]);
    assert!(is_smooth(&a3, 3, CAP).unwrap().smooth);
    let circle = scheme(&field(gf(5)), &["x", "y"], &["x^2 + y^2 - 1"]);
    assert!(is_smooth(&circle, 1, CAP).unwrap().smooth);
}

#[test]
fn cusp_is_refuted_with_witness() {
    let q = field(BaseField::Rationals);
    let cusp = scheme(&q, &["x", "y"], &["y^2 - x^3"]);
    let rep = is_smooth(&cusp, 1, CAP).unwrap();
    assert!(!rep.smooth);
    assert_eq!(rep.certificate, ["y", "x^2"]);
}

#[test]
fn empty_scheme_is_vacuously_smooth() {
    let q = field(BaseField::Rationals);
    let empty = scheme(&q, &["x"], &["1"]);
    let rep = is_smooth(&empty, 1, CAP).unwrap();
    assert!(rep.smooth && rep.empty);
}

#[test]
fn closed_embeddings() {
    let q = field(BaseField::Rationals);
    let plane = scheme(&q, &["x", "y"], &[]);
    let y = parse_poly(plane.ring(), "y").unwrap();
    let (axis, incl) = closed_subscheme(&plane, &[y]).unwrap();
    let cert = is_closed_embedding(&incl, CAP).unwrap();
    assert!(cert.closed_embedding);
    assert_eq!(axis.nvars(), 2);

    let line = scheme(&q, &["x"], &[]);
    let (_, gm_incl) = distinguished_open(&line, &line.var(0)).unwrap();
    let cert = is_closed_embedding(&gm_incl, CAP).unwrap();
    assert!(!cert.closed_embedding);
    assert_eq!(cert.expressions, [Some("x".to_string()), None]);

    let f2 = field(gf(2));
    let line2 = scheme(&f2, &["x"], &[]);
    let frob = Morphism::new(line2.clone(), line2.clone(), vec![parse_poly(line2.ring(), "x^2").unwrap()], CAP)
        .unwrap();
    assert!(!is_closed_embedding(&frob, CAP).unwrap().closed_embedding);
}

#[test]
fn morphism_validation() {
    let f4 = algebra(gf(2), &[1, 1, 1]);
    let gm = scheme(&f4, &["x", "y"], &["x*y - 1"]);
    let line = scheme(&f4, &["x"], &[]);
    assert!(Morphism::new(gm.clone(), line.clone(), vec![gm.var(0)], CAP).is_ok());
    assert!(matches!(
        Morphism::new(line.clone(), gm.clone(), vec![line.var(0)], CAP),
        Err(Error::ArityMismatch { expected: 2, found: 1 })
    ));
    let bad = Morphism::new(line.clone(), gm.clone(), vec![line.var(0), line.var(0)], CAP);
    assert!(matches!(bad, Err(Error::NotWellDefined { index: 0, .. })));
    assert!(Morphism::identity(&gm).is_identity(CAP).unwrap().is_empty());
}

#[test]
fn opens_and_products() {
    let q = field(BaseField::Rationals);
    let line = scheme(&q, &["x"], &[]);
    let (empty, _) = distinguished_open(&line, &parse_poly(line.ring(), "0").unwrap()).unwrap();
    assert!(empty.is_empty(CAP).unwrap());
    let (whole, _) = distinguished_open(&line, &parse_poly(line.ring(), "1").unwrap()).unwrap();
    assert_eq!(whole.dimension(CAP).unwrap(), 1);
    let (plane, _, _) = product(&line, &line).unwrap();
    assert_eq!(plane.vars(), ["x", "x'"]);
    assert!(plane.generators().is_empty());
}

#[test]
fn etale_covers() {
    let f25 = algebra(gf(5), &[2, 0, 1]);
    let gm = scheme(&f25, &["x", "y"], &["x*y - 1"]);
    let ring = extended_ring(&gm, &["z".into()]);
    let rel = parse_poly(&ring, "z^2 - x").unwrap();
    let (cover, _) = relative_scheme(&gm, &["z".into()], vec![rel]).unwrap();
    let rep = is_etale_morphism(&cover, CAP).unwrap();
    assert!(rep.etale);
    assert_eq!(rep.certificate, ["1"]);

    let f2 = field(gf(2));
    let line = scheme(&f2, &["x"], &[]);
    let ring = extended_ring(&line, &["z".into()]);
    let (frob, _) = relative_scheme(&line, &["z".into()], vec![parse_poly(&ring, "z^2 - x").unwrap()]).unwrap();
    assert!(!is_etale_morphism(&frob, CAP).unwrap().etale);

    let (same, _) = relative_scheme(&line, &[], vec![]).unwrap();
    assert!(is_etale_morphism(&same, CAP).unwrap().etale);

    let (open, _) = distinguished_open(&line, &line.var(0)).unwrap();
    assert!(is_etale_morphism(&open, CAP).unwrap().etale);
    assert!(matches!(is_etale_morphism(&line, CAP), Err(Error::NoRelativePresentation)));
}
