use std::sync::Arc;

use super::affine::{fresh_name, AffineScheme, Provenance};
use super::morphism::Morphism;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// The fiber product of `f: X → Z` and `g: Y → Z` with its two projections.
/// Variables of `Y` that clash with those of `X` get primes appended.
pub fn fiber_product(f: &Morphism, g: &Morphism) -> Result<(Arc<AffineScheme>, Morphism, Morphism)> {
    let (x, y) = (f.source(), g.source());
    if *f.target() != *g.target() {
        return Err(Error::RingMismatch("morphisms have different targets".into()));
    }
    if x.coef() != y.coef() {
        return Err(Error::RingMismatch("schemes over different bases".into()));
    }
    let mut vars = x.vars().to_vec();
    for v in y.vars() {
        let name = fresh_name(v, &vars);
        vars.push(name);
    }
    let ring = PolyRing::new(x.coef().clone(), vars);
    let nx = x.nvars();
    let px: Vec<usize> = (0..nx).collect();
    let py: Vec<usize> = (nx..nx + y.nvars()).collect();
    let mut gens: Vec<Poly> = x.generators().iter().map(|p| p.relabel(&ring, &px)).collect();
    gens.extend(y.generators().iter().map(|p| p.relabel(&ring, &py)));
    for (a, b) in f.images().iter().zip(g.images()) {
        let d = &a.relabel(&ring, &px) - &b.relabel(&ring, &py);
        if !d.is_zero() {
            gens.push(d);
        }
    }
    let w = Arc::new(AffineScheme::new(ring.clone(), gens)?.with_provenance(Provenance::Product));
    let p1 = Morphism::new_unchecked(w.clone(), x.clone(), px.iter().map(|&i| w.var(i)).collect())?;
    let p2 = Morphism::new_unchecked(w.clone(), y.clone(), py.iter().map(|&i| w.var(i)).collect())?;
    Ok((w, p1, p2))
}

/// The structure morphism `X → Spec C`.
pub fn to_point(x: &Arc<AffineScheme>) -> Morphism {
    let pt = Arc::new(AffineScheme::point(x.coef().clone()));
    Morphism::new_unchecked(x.clone(), pt, Vec::new()).expect("no coordinates")
}

/// `X × Y` over the common coefficient algebra.
pub fn product(x: &Arc<AffineScheme>, y: &Arc<AffineScheme>) -> Result<(Arc<AffineScheme>, Morphism, Morphism)> {
    let fx = to_point(x);
    let fy = Morphism::new_unchecked(y.clone(), fx.target().clone(), Vec::new())?;
    fiber_product(&fx, &fy)
}

/// `D(g) ⊂ X`, presented by a new last variable `y` with `y*g - 1`.
pub fn distinguished_open(x: &Arc<AffineScheme>, g: &Poly) -> Result<(Arc<AffineScheme>, Morphism)> {
    if **g.ring() != **x.ring() {
        return Err(Error::RingMismatch(format!("{g} is not a function on the scheme")));
    }
    let name = fresh_name("y", x.vars());
    let (ring, mut gens) = x.extend_vars(&[name]);
    let n = x.nvars();
    let positions: Vec<usize> = (0..n).collect();
    let y = Poly::var(&ring, n);
    gens.push(&(&y * &g.relabel(&ring, &positions)) - &Poly::one(&ring));
    let u = Arc::new(AffineScheme::new(ring, gens)?.with_provenance(Provenance::Open {
        parent: x.clone(),
        g: g.clone(),
    }));
    let incl = Morphism::new_unchecked(u.clone(), x.clone(), (0..n).map(|i| u.var(i)).collect())?;
    Ok((u, incl))
}

/// The closed subscheme of `X` cut out by `extra`.
pub fn closed_subscheme(x: &Arc<AffineScheme>, extra: &[Poly]) -> Result<(Arc<AffineScheme>, Morphism)> {
    let mut gens = x.generators().to_vec();
    gens.extend(extra.iter().cloned());
    let z = Arc::new(AffineScheme::new(x.ring().clone(), gens)?.with_provenance(Provenance::Closed {
        parent: x.clone(),
        extra: extra.to_vec(),
    }));
    let incl = Morphism::new_unchecked(z.clone(), x.clone(), (0..x.nvars()).map(|i| z.var(i)).collect())?;
    Ok((z, incl))
}

/// `base[fiber_vars]/(base ideal + relations)` with its projection to `base`.
pub fn relative_scheme(
    base: &Arc<AffineScheme>,
    fiber_vars: &[String],
    relations: Vec<Poly>,
) -> Result<(Arc<AffineScheme>, Morphism)> {
    let (ring, mut gens) = base.extend_vars(fiber_vars);
    for r in &relations {
        if **r.ring() != *ring {
            return Err(Error::RingMismatch(format!("relation {r} is not over the extended ring")));
        }
    }
    gens.extend(relations);
    let x = Arc::new(AffineScheme::new(ring, gens)?.with_provenance(Provenance::Relative {
        base: base.clone(),
        fiber_vars: fiber_vars.len(),
    }));
    let proj = Morphism::new_unchecked(x.clone(), base.clone(), (0..base.nvars()).map(|i| x.var(i)).collect())?;
    Ok((x, proj))
}

/// The ring of `x` with its variables followed by `extra`.
pub fn extended_ring(x: &AffineScheme, extra: &[String]) -> Arc<PolyRing> {
    x.extend_vars(extra).0
}
