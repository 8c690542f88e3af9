use std::sync::Arc;

use serde::Serialize;

use super::affine::{AffineScheme, Provenance};
use super::morphism::Morphism;
use crate::error::{Error, Result};
use crate::poly::{groebner, jacobian, minors, MonomialOrder, Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    pub closed_embedding: bool,
    /// For each source variable, an expression in the target coordinates
    /// whose pullback equals it, or `None` if there is none.
    pub expressions: Vec<Option<String>>,
}

/// Whether `O(Y) → O(X)` is surjective, decided by eliminating the source
/// variables against tag variables for the coordinate images.
pub fn is_closed_embedding(m: &Morphism, cap: u32) -> Result<EmbeddingCertificate> {
    let (x, y) = (m.source(), m.target());
    let nx = x.nvars();
    let mut vars = x.vars().to_vec();
    vars.extend((0..y.nvars()).map(|u| format!("tag{u}")));
    let ring = PolyRing::with_order(x.coef().clone(), vars, MonomialOrder::Elimination(nx));
    let px: Vec<usize> = (0..nx).collect();
    let mut gens: Vec<Poly> = x.generators().iter().map(|g| g.relabel(&ring, &px)).collect();
    for (u, im) in m.images().iter().enumerate() {
        gens.push(&Poly::var(&ring, nx + u) - &im.relabel(&ring, &px));
    }
    let gb = groebner(&ring, &gens, cap)?;
    // tag u ↦ y_u, source variables ↦ 0 (they do not occur in an eliminated remainder)
    let back: Vec<Poly> = (0..nx)
        .map(|_| Poly::zero(y.ring()))
        .chain((0..y.nvars()).map(|u| y.var(u)))
        .collect();
    let mut expressions = Vec::with_capacity(nx);
    for i in 0..nx {
        let nf = gb.normal_form(&Poly::var(&ring, i));
        let eliminated = nf.support().iter().all(|&v| v >= nx);
        expressions.push(if eliminated {
            Some(nf.substitute_into(y.ring(), &back)?.to_string())
        } else {
            None
        });
    }
    Ok(EmbeddingCertificate {
        closed_embedding: expressions.iter().all(Option::is_some),
        expressions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// The scheme is empty and the answer holds vacuously.
    pub empty: bool,
    pub dimension: i64,
    pub expected_dimension: i64,
    /// Reduced Gröbner basis of the ideal plus the Jacobian minors; `["1"]`
    /// certifies smoothness.
    pub certificate: Vec<String>,
}

/// Jacobian criterion: `X ⊂ 𝔸ⁿ` is smooth of dimension `r` when its
/// dimension is `r` and the ideal together with the `(n − r)`-minors of the
/// Jacobian is the unit ideal.
pub fn is_smooth(x: &AffineScheme, r: usize, cap: u32) -> Result<SmoothnessReport> {
    let dimension = x.dimension(cap)?;
    let mut report = SmoothnessReport {
        smooth: false,
        empty: dimension < 0,
        dimension,
        expected_dimension: r as i64,
        certificate: Vec::new(),
    };
    if report.empty {
        report.smooth = true;
        return Ok(report);
    }
    if dimension != r as i64 || r > x.nvars() {
        return Ok(report);
    }
    let vars: Vec<usize> = (0..x.nvars()).collect();
    let jac = jacobian(x.generators(), &vars);
    let mut gens = x.generators().to_vec();
    gens.extend(minors(x.ring(), &jac, x.nvars() - r));
    let gb = groebner(x.ring(), &gens, cap)?;
    report.smooth = gb.is_unit();
    report.certificate = gb.basis().iter().map(|p| p.to_string()).collect();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleReport {
    pub etale: bool,
    pub fiber_vars: usize,
    pub relations: Vec<String>,
    pub certificate: Vec<String>,
}

/// The relative presentation `X = Y[z_1..z_s]/J` recorded in the provenance.
pub fn relative_presentation(x: &AffineScheme) -> Result<(Arc<AffineScheme>, usize, Vec<Poly>)> {
    match x.provenance() {
        Provenance::Open { parent, .. } => {
            let rel = x.generators()[parent.generators().len()..].to_vec();
            Ok((parent.clone(), 1, rel))
        }
        Provenance::Relative { base, fiber_vars } => {
            let rel = x.generators()[base.generators().len()..].to_vec();
            Ok((base.clone(), *fiber_vars, rel))
        }
        _ => Err(Error::NoRelativePresentation),
    }
}

/// Étaleness of the structure map of a relatively presented `X → Y`: the
/// `s × s` minors of the Jacobian of `J` in the fiber variables generate the
/// unit ideal modulo the ideal of `X`.
pub fn is_etale_morphism(x: &AffineScheme, cap: u32) -> Result<EtaleReport> {
    let (_, s, rel) = relative_presentation(x)?;
    let n = x.nvars();
    let fiber: Vec<usize> = (n - s..n).collect();
    let jac = jacobian(&rel, &fiber);
    let mut gens = x.generators().to_vec();
    gens.extend(minors(x.ring(), &jac, s));
    let gb = groebner(x.ring(), &gens, cap)?;
    Ok(EtaleReport {
        etale: gb.is_unit() && rel.len() == s,
        fiber_vars: s,
        relations: rel.iter().map(|p| p.to_string()).collect(),
        certificate: gb.basis().iter().map(|p| p.to_string()).collect(),
    })
}
