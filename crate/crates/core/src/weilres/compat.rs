use std::sync::Arc;

use serde::Serialize;

use super::restrict::{restrict_morphism, restrict_partial, restrict_scheme, restricted_name};
use crate::error::{Error, Result};
use crate::report::{all_passed, checked_morphism, composite_check, Check};
use crate::scheme::{fiber_product, fresh_name, product, AffineScheme, Provenance};

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub left_vars: usize,
    pub right_vars: usize,
    pub left_generators: Vec<String>,
    pub right_generators: Vec<String>,
    pub checks: Vec<Check>,
}

impl ComparisonReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Mutually inverse coordinate maps `left ⇄ right` given by matching variable
/// positions, checked for well-definedness and for both composites.
pub(crate) fn positional_comparison(left: &Arc<AffineScheme>, right: &Arc<AffineScheme>, cap: u32) -> Result<ComparisonReport> {
    let mut checks = Vec::new();
    let mut report = ComparisonReport {
        left_vars: left.nvars(),
        right_vars: right.nvars(),
        left_generators: left.display_generators(),
        right_generators: right.display_generators(),
        checks: Vec::new(),
    };
    if left.nvars() != right.nvars() {
        checks.push(Check::fail(
            "variable counts agree",
            format!("{} vs {}", left.nvars(), right.nvars()),
        ));
        report.checks = checks;
        return Ok(report);
    }
    let fwd_images = (0..right.nvars()).map(|i| left.var(i)).collect();
    let (fwd, c1) = checked_morphism("comparison", left, right, fwd_images, cap)?;
    let back_images = (0..left.nvars()).map(|i| right.var(i)).collect();
    let (back, c2) = checked_morphism("inverse", right, left, back_images, cap)?;
    checks.push(c1);
    checks.push(c2);
    if let (Some(f), Some(b)) = (fwd, back) {
        checks.push(composite_check("inverse . comparison = id", &f, &b, cap)?);
        checks.push(composite_check("comparison . inverse = id", &b, &f, cap)?);
    }
    report.checks = checks;
    Ok(report)
}

fn is_affine_space(t: &AffineScheme) -> bool {
    matches!(t.provenance(), Provenance::Raw) && t.generators().is_empty()
}

/// `R_{T'/T}(X ×_S T') ≅ R(X) ×_T T` for `T` an affine space, a distinguished
/// open of one, or the point. The left side restricts the fiber product while
/// keeping the coordinates of `T` unexpanded.
pub fn base_change_compat(x: &Arc<AffineScheme>, t: &Arc<AffineScheme>, cap: u32) -> Result<ComparisonReport> {
    let supported = is_affine_space(t)
        || matches!(t.provenance(), Provenance::Open { parent, .. } if is_affine_space(parent));
    if !supported {
        return Err(Error::UnsupportedBaseChange(
            "the base must be an affine space or a distinguished open of one".into(),
        ));
    }
    let l = x.coef();
    if !t.coef().is_trivial() || t.base_field() != l.base() {
        return Err(Error::RingMismatch("the base must be over the base field".into()));
    }
    let t_l = Arc::new(t.base_change(l)?);
    let (xt, _, _) = product(x, &t_l)?;
    let left = restrict_partial(&xt, x.nvars(), cap)?;
    let rx = restrict_scheme(x, cap)?;
    let (right, _, _) = product(rx.scheme(), t)?;
    positional_comparison(left.scheme(), &right, cap)
}

/// `R(X ×_Z Y) ≅ R(X) ×_{R(Z)} R(Y)`: the comparison map is assembled from
/// the restricted projections, its inverse from the coordinates of the two
/// factors.
pub fn fiber_product_compat(
    f: &crate::scheme::Morphism,
    g: &crate::scheme::Morphism,
    cap: u32,
) -> Result<ComparisonReport> {
    let (w, p1, p2) = fiber_product(f, g)?;
    let rw = restrict_scheme(&w, cap)?;
    let rx = restrict_scheme(f.source(), cap)?;
    let ry = restrict_scheme(g.source(), cap)?;
    let rz = restrict_scheme(f.target(), cap)?;
    let rf = restrict_morphism(f, &rx, &rz, cap)?;
    let rg = restrict_morphism(g, &ry, &rz, cap)?;
    let (p, q1, q2) = fiber_product(&rf, &rg)?;
    let rp1 = restrict_morphism(&p1, &rw, &rx, cap)?;
    let rp2 = restrict_morphism(&p2, &rw, &ry, cap)?;

    let mut checks = Vec::new();
    let mut fwd_images = rp1.images().to_vec();
    fwd_images.extend(rp2.images().iter().cloned());
    let (fwd, c1) = checked_morphism("comparison", rw.scheme(), &p, fwd_images, cap)?;
    // the coordinate x_{i,j} of R(X ×_Z Y) is the coordinate x_{i,j} of the first factor
    let nx = f.source().nvars();
    let e = rw.expansion();
    let d = e.degree();
    let mut back_images = vec![p.var(0); rw.scheme().nvars()];
    for i in 0..w.nvars() {
        for j in 0..d {
            let image = if i < nx {
                q1.images()[rx.expansion().index(i, j)].clone()
            } else {
                q2.images()[ry.expansion().index(i - nx, j)].clone()
            };
            back_images[e.index(i, j)] = image;
        }
    }
    let (back, c2) = checked_morphism("inverse", &p, rw.scheme(), back_images, cap)?;
    checks.push(c1);
    checks.push(c2);
    if let (Some(fw), Some(bk)) = (fwd, back) {
        checks.push(composite_check("inverse . comparison = id", &fw, &bk, cap)?);
        checks.push(composite_check("comparison . inverse = id", &bk, &fw, cap)?);
    }
    Ok(ComparisonReport {
        left_vars: rw.scheme().nvars(),
        right_vars: p.nvars(),
        left_generators: rw.scheme().display_generators(),
        right_generators: p.display_generators(),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    pub n: usize,
    pub vars: Vec<String>,
    pub generators: Vec<String>,
    pub checks: Vec<Check>,
}

impl ShadowReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// `R(X ×_L 𝔸ⁿ_L)` and `R(X) ×_k 𝔸^{nd}_k` have identical presentations.
pub fn affine_shadow(x: &Arc<AffineScheme>, n: usize, cap: u32) -> Result<ShadowReport> {
    let l = x.coef().clone();
    let mut names = Vec::new();
    for a in 0..n {
        let name = fresh_name(&format!("a{}", a + 1), x.vars());
        names.push(name);
    }
    let line = Arc::new(AffineScheme::affine_space(l.clone(), names.clone()));
    let (xa, _, _) = product(x, &line)?;
    let left = restrict_scheme(&xa, cap)?;
    let rx = restrict_scheme(x, cap)?;
    let flat: Vec<String> = names
        .iter()
        .flat_map(|v| (0..l.degree()).map(move |j| restricted_name(v, j)))
        .collect();
    let k = Arc::new(crate::algebra::EtaleAlgebra::trivial(l.base()));
    let space = Arc::new(AffineScheme::affine_space(k, flat));
    let (right, _, _) = product(rx.scheme(), &space)?;
    let mut checks = Vec::new();
    let (lv, rv) = (left.scheme().vars(), right.vars());
    checks.push(if lv == rv {
        Check::pass("variables agree")
    } else {
        Check::fail("variables agree", format!("{lv:?} vs {rv:?}"))
    });
    let (lg, rg) = (left.scheme().display_generators(), right.display_generators());
    checks.push(if lg == rg {
        Check::pass("generators agree")
    } else {
        Check::fail("generators agree", format!("{lg:?} vs {rg:?}"))
    });
    Ok(ShadowReport {
        n,
        vars: lv.to_vec(),
        generators: lg,
        checks,
    })
}
