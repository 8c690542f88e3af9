use std::sync::Arc;

use serde::Serialize;

use super::restrict::restrict_scheme;
use crate::algebra::{tensor_split, GaloisGroup, TensorElem, TensorSquare};
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::report::{all_passed, checked_morphism, composite_check, Check};
use crate::scheme::AffineScheme;

/// `X^σ`: the automorphism applied to every coefficient of every generator.
pub fn twist(x: &AffineScheme, group: &GaloisGroup, sigma: usize) -> Result<AffineScheme> {
    if **x.coef() != **group.algebra() {
        return Err(Error::RingMismatch("scheme and Galois group over different algebras".into()));
    }
    let gens = x
        .generators()
        .iter()
        .map(|g| g.map_coefficients(x.ring(), |c| group.apply(sigma, c)))
        .collect();
    AffineScheme::new(x.ring().clone(), gens)
}

/// Orthogonality, completeness and the twisted-diagonal relation for the
/// idempotents of `L ⊗ L`.
pub fn idempotent_checks(group: &GaloisGroup, es: &[TensorElem]) -> Vec<Check> {
    let ts = TensorSquare::new(group.algebra().clone());
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for (s, e) in es.iter().enumerate() {
        for (r, f) in es.iter().enumerate() {
            let p = ts.mul(e, f);
            let ok = if r == s { p == *e } else { ts.is_zero(&p) };
            if !ok {
                failures.push(format!("e{s} * e{r}"));
            }
        }
    }
    checks.push(Check::new("idempotents are orthogonal", failures));
    let sum = es.iter().fold(ts.zero(), |acc, e| ts.add(&acc, e));
    checks.push(if sum == ts.one() {
        Check::pass("idempotents sum to 1")
    } else {
        Check::fail("idempotents sum to 1", "sum differs from 1")
    });
    let failures = (0..es.len())
        .filter(|&s| !ts.fixes_twisted_diagonal(group, s, &es[s]))
        .map(|s| format!("e{s}"))
        .collect();
    checks.push(Check::new("(1 ⊗ a - σ(a) ⊗ 1) e_σ = 0", failures));
    checks
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub group_order: usize,
    pub automorphisms: Vec<String>,
    pub twists: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl DecompositionReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// The product `∏_σ X^σ` over `L`, with variable `x` of factor `σ` named `x@σ`.
pub fn twist_product(x: &AffineScheme, group: &GaloisGroup) -> Result<Arc<AffineScheme>> {
    let n = x.nvars();
    let vars = (0..group.order())
        .flat_map(|s| x.vars().iter().map(move |v| format!("{v}@{s}")))
        .collect();
    let ring = PolyRing::new(x.coef().clone(), vars);
    let mut gens = Vec::new();
    for s in 0..group.order() {
        let positions: Vec<usize> = (s * n..(s + 1) * n).collect();
        let tw = twist(x, group, s)?;
        gens.extend(tw.generators().iter().map(|g| g.relabel(&ring, &positions)));
    }
    Ok(Arc::new(AffineScheme::new(ring, gens)?))
}

/// `R(X)_L ≅ ∏_σ X^σ`. Forward: `x^{(σ)}_i ↦ Σ_j σ(t)^j x_{i,j}`. Backward:
/// `x_{i,j} ↦ Σ_σ c^σ_j x^{(σ)}_i` with `c^σ_j = Σ_a e_σ[a][j] t^a` read off
/// the idempotent `e_σ` of `L ⊗ L`.
pub fn galois_decomposition(x: &Arc<AffineScheme>, group: &GaloisGroup, cap: u32) -> Result<DecompositionReport> {
    let l = group.algebra().clone();
    let d = l.degree();
    let n = x.nvars();
    let es = tensor_split(group)?;
    let mut checks = idempotent_checks(group, &es);

    let id_twist = twist(x, group, group.identity())?;
    checks.push(if id_twist == **x {
        Check::pass("identity twist is trivial")
    } else {
        Check::fail("identity twist is trivial", "presentation changed")
    });
    let mut failures = Vec::new();
    for s in 0..group.order() {
        for r in 0..group.order() {
            let composite = group.compose(s, r).expect("closed group");
            let direct = twist(x, group, composite)?;
            let stepwise = twist(&twist(x, group, r)?, group, s)?;
            if direct != stepwise {
                failures.push(format!("σ{s} ∘ σ{r}"));
            }
        }
    }
    checks.push(Check::new("twisting is functorial", failures));

    let rx = restrict_scheme(x, cap)?;
    let rxl = rx.base_changed()?;
    let prod = twist_product(x, group)?;
    let e = rx.expansion();

    let mut fwd_images = Vec::with_capacity(prod.nvars());
    for s in 0..group.order() {
        let st = &group.images()[s];
        for i in 0..n {
            let mut acc = Poly::zero(rxl.ring());
            let mut power = l.one();
            for j in 0..d {
                acc = &acc + &rxl.var(e.index(i, j)).scale(&power);
                power = l.mul(&power, st);
            }
            fwd_images.push(acc);
        }
    }
    let (fwd, c1) = checked_morphism("R(X)_L -> product of twists", &rxl, &prod, fwd_images, cap)?;

    let mut back_images = vec![Poly::zero(prod.ring()); rxl.nvars()];
    for i in 0..n {
        for j in 0..d {
            let mut acc = Poly::zero(prod.ring());
            for (s, es_s) in es.iter().enumerate() {
                let coef = (0..d).fold(l.zero(), |c, a| {
                    l.add(&c, &l.scale(&es_s[a][j], &l.basis_element(a)))
                });
                acc = &acc + &prod.var(s * n + i).scale(&coef);
            }
            back_images[e.index(i, j)] = acc;
        }
    }
    let (back, c2) = checked_morphism("product of twists -> R(X)_L", &prod, &rxl, back_images, cap)?;
    checks.push(c1);
    checks.push(c2);
    if let (Some(f), Some(b)) = (fwd, back) {
        checks.push(composite_check("backward . forward = id", &f, &b, cap)?);
        checks.push(composite_check("forward . backward = id", &b, &f, cap)?);
    }
    let twists = (0..group.order())
        .map(|s| Ok(twist(x, group, s)?.display_generators()))
        .collect::<Result<_>>()?;
    Ok(DecompositionReport {
        group_order: group.order(),
        automorphisms: group.images().iter().map(|r| l.display(r)).collect(),
        twists,
        checks,
    })
}
