use std::sync::Arc;

use serde::Serialize;

use super::restrict::{restrict_morphism, restrict_scheme, Restriction};
use crate::algebra::EtaleAlgebra;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::{all_passed, identity_check, Check};
use crate::scheme::{AffineScheme, Morphism};

/// The counit `R(X)_L → X`, `x_i ↦ Σ_j x_{i,j} t^j`.
pub fn counit(rx: &Restriction, cap: u32) -> Result<Morphism> {
    let source = rx.base_changed()?;
    Morphism::new(source, rx.source().clone(), rx.expansion().images().to_vec(), cap)
}

/// The unit `Y → R(Y_L)` of a scheme over the base field, together with the
/// restriction it lands in.
pub struct Unit {
    pub base_changed: Arc<AffineScheme>,
    pub restriction: Restriction,
    pub morphism: Morphism,
}

/// `y_{u,0} ↦ y_u` and `y_{u,j} ↦ 0` for `j > 0`.
pub fn unit(y: &Arc<AffineScheme>, l: &Arc<EtaleAlgebra>, cap: u32) -> Result<Unit> {
    if !y.coef().is_trivial() || y.base_field() != l.base() {
        return Err(Error::RingMismatch(format!(
            "the unit needs a scheme over {}",
            l.base()
        )));
    }
    let y_l = Arc::new(y.base_change(l)?);
    let restriction = restrict_scheme(&y_l, cap)?;
    let e = restriction.expansion();
    let mut images = vec![Poly::zero(y.ring()); restriction.scheme().nvars()];
    for u in 0..y.nvars() {
        images[e.index(u, 0)] = y.var(u);
    }
    let morphism = Morphism::new(y.clone(), restriction.scheme().clone(), images, cap)?;
    Ok(Unit {
        base_changed: y_l,
        restriction,
        morphism,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub checks: Vec<Check>,
}

impl TriangleReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// (a) `R(ε_X) ∘ η_{R(X)} = id` on `R(X)` and (b) `ε_{Y_L} ∘ (η_Y)_L = id` on
/// `Y_L`, each checked coordinatewise modulo the ideal.
pub fn triangle_identities(
    x: &Arc<AffineScheme>,
    y: &Arc<AffineScheme>,
    cap: u32,
) -> Result<TriangleReport> {
    let l = x.coef().clone();
    let mut checks = Vec::new();

    let rx = restrict_scheme(x, cap)?;
    let eps = counit(&rx, cap)?;
    let eta = unit(rx.scheme(), &l, cap)?;
    let r_eps = restrict_morphism(&eps, &eta.restriction, &rx, cap)?;
    checks.push(identity_check(
        "R(counit) . unit = id on R(X)",
        &eta.morphism.then(&r_eps)?,
        cap,
    )?);

    let eta_y = unit(y, &l, cap)?;
    let ry_l = &eta_y.restriction;
    let eta_y_l = eta_y.morphism.base_change(&eta_y.base_changed, &ry_l.base_changed()?)?;
    let eps_y = counit(ry_l, cap)?;
    checks.push(identity_check(
        "counit . unit_L = id on Y_L",
        &eta_y_l.then(&eps_y)?,
        cap,
    )?);
    Ok(TriangleReport { checks })
}
