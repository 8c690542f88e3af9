use std::sync::Arc;

use serde::Serialize;

use super::presentation::{total_space, Bundle, TotalSpace};
use super::restrict::restrict_bundle;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::points::{
    enumerate_points, jacobian_at, linear, pack, tensor_point_ring, unpack, FiniteRing, PointRing,
};
use crate::poly::{groebner, Poly};
use crate::report::{all_passed, Check};
use crate::scheme::{closed_subscheme, is_smooth, AffineScheme};
use crate::weilres::{positional_comparison, restrict_scheme};

/// The normal bundle of a complete intersection `Z = V(h_1..h_c) ⊂ X`: free
/// of rank `c` on the classes of the `h_i`.
#[derive(Clone, Debug)]
pub struct NormalBundle {
    pub ambient: Arc<AffineScheme>,
    pub sub: Arc<AffineScheme>,
    pub equations: Vec<Poly>,
    pub bundle: Bundle,
    pub total: TotalSpace,
    pub checks: Vec<Check>,
}

impl NormalBundle {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Checks that no `h_i` lies in the ideal of `X` plus the other equations and
/// that `Z` has codimension `c`.
fn complete_intersection(x: &AffineScheme, z: &AffineScheme, hs: &[Poly], cap: u32) -> Result<()> {
    for (i, h) in hs.iter().enumerate() {
        let mut gens = x.generators().to_vec();
        gens.extend(hs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()));
        if groebner(x.ring(), &gens, cap)?.contains(h) {
            return Err(Error::NotCompleteIntersection(format!(
                "{h} lies in the ideal of the other equations"
            )));
        }
    }
    let (dx, dz) = (x.dimension(cap)?, z.dimension(cap)?);
    if dz >= 0 && dx - dz != hs.len() as i64 {
        return Err(Error::NotCompleteIntersection(format!(
            "codimension {} with {} equations",
            dx - dz,
            hs.len()
        )));
    }
    Ok(())
}

fn smooth_check(name: &str, x: &AffineScheme, cap: u32) -> Result<Check> {
    let dim = x.dimension(cap)?.max(0) as usize;
    let rep = is_smooth(x, dim, cap)?;
    Ok(if rep.smooth {
        Check::pass(format!("{name} is smooth"))
    } else {
        Check::fail(format!("{name} is smooth"), format!("certificate {:?}", rep.certificate))
    })
}

pub fn normal_presentation(x: &Arc<AffineScheme>, hs: &[Poly], cfg: &Config) -> Result<NormalBundle> {
    let cap = cfg.gb_degree_cap;
    let (z, _) = closed_subscheme(x, hs)?;
    complete_intersection(x, &z, hs, cap)?;
    let checks = vec![smooth_check("X", x, cap)?, smooth_check("Z", &z, cap)?];
    let bundle = Bundle::free(&z, hs.len());
    let total = total_space(&bundle, cfg)?;
    Ok(NormalBundle {
        ambient: x.clone(),
        sub: z,
        equations: hs.to_vec(),
        bundle,
        total,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberwiseResult {
    pub algebra: String,
    pub points: usize,
    /// Rank of the normal space over the test algebra, imposed only for
    /// complete intersections.
    pub normal_rank: Option<usize>,
    pub check: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalCompatReport {
    pub codimension: usize,
    /// `None` when the equations are not a complete intersection.
    pub presentation: Option<Vec<Check>>,
    pub notice: Option<String>,
    pub fiberwise: Vec<FiberwiseResult>,
}

impl NormalCompatReport {
    pub fn verified(&self) -> bool {
        self.presentation.as_deref().is_none_or(all_passed) && self.fiberwise.iter().all(|f| f.check.passed)
    }
}

/// `R(N_{Z/X}) ≅ N_{R(Z)/R(X)}`, on presentations when the equations form a
/// complete intersection and on tangent spaces at every point of `R(Z)` over
/// each ring in `fields`.
pub fn normal_compat(
    x: &Arc<AffineScheme>,
    hs: &[Poly],
    fields: &[Arc<FiniteRing>],
    cfg: &Config,
) -> Result<NormalCompatReport> {
    let cap = cfg.gb_degree_cap;
    let rx = restrict_scheme(x, cap)?;
    let (z, _) = closed_subscheme(x, hs)?;
    let rz = restrict_scheme(&z, cap)?;
    let d = rx.expansion().degree();
    let mut report = NormalCompatReport {
        codimension: hs.len(),
        presentation: None,
        notice: None,
        fiberwise: Vec::new(),
    };
    match normal_presentation(x, hs, cfg) {
        Ok(nb) => report.presentation = Some(presentation_checks(&nb, &rx, &rz, cfg)?),
        Err(Error::NotCompleteIntersection(why)) => {
            report.notice = Some(format!("fiberwise comparison only: {why}"));
        }
        Err(e) => return Err(e),
    }
    let expected = report.presentation.is_some().then_some(d * hs.len());
    for a in fields {
        report.fiberwise.push(fiberwise(x, &z, &rx, &rz, a, expected, cfg)?);
    }
    Ok(report)
}

fn presentation_checks(
    nb: &NormalBundle,
    rx: &crate::weilres::Restriction,
    rz: &crate::weilres::Restriction,
    cfg: &Config,
) -> Result<Vec<Check>> {
    let cap = cfg.gb_degree_cap;
    let mut checks = nb.checks.clone();
    let comps: Vec<Poly> = nb
        .equations
        .iter()
        .map(|h| rx.expansion().expand(h))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let target = match normal_presentation(rx.scheme(), &comps, cfg) {
        Ok(t) => t,
        Err(Error::NotCompleteIntersection(why)) => {
            checks.push(Check::fail("components form a complete intersection over k", why));
            return Ok(checks);
        }
        Err(e) => return Err(e),
    };
    checks.push(Check::pass("components form a complete intersection over k"));
    checks.extend(target.checks.iter().map(|c| Check {
        name: format!("restricted {}", c.name),
        ..c.clone()
    }));
    let same_sub = positional_comparison(rz.scheme(), &target.sub, cap)?;
    checks.push(Check::new(
        "R(Z) is cut out by the components",
        same_sub.checks.into_iter().filter(|c| !c.passed).map(|c| c.name).collect(),
    ));
    let rb = restrict_bundle(&nb.bundle, cfg)?;
    let rs = rb.restriction.scheme();
    let mut failures = Vec::new();
    for (i, row) in rb.bundle.matrix().iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let want = if i == j { Poly::one(rs.ring()) } else { Poly::zero(rs.ring()) };
            if !rs.normal_form(&(e - &want), cap)?.is_zero() {
                failures.push(format!("entry ({i}, {j})"));
            }
        }
    }
    checks.push(Check::new("R(N) is free on the component classes", failures));
    let totals = positional_comparison(&rb.total.scheme, &target.total.scheme, cap)?;
    checks.push(Check::new(
        "canonical map R(N) -> N is an isomorphism",
        totals.checks.into_iter().filter(|c| !c.passed).map(|c| c.name).collect(),
    ));
    Ok(checks)
}

/// At `α ∈ R(Z)(A)` with adjoint `z ∈ Z(A ⊗ L)`, unpacking coordinates must
/// carry `T_z X` onto `T_α R(X)` and `T_z Z` onto `T_α R(Z)`, so the induced
/// map of normal spaces is bijective.
fn fiberwise(
    x: &AffineScheme,
    z: &AffineScheme,
    rx: &crate::weilres::Restriction,
    rz: &crate::weilres::Restriction,
    a: &Arc<FiniteRing>,
    expected: Option<usize>,
    cfg: &Config,
) -> Result<FiberwiseResult> {
    let over_a = PointRing::over_base(a.clone(), rz.scheme().coef().clone())?;
    let al = tensor_point_ring(a, x.coef())?;
    let pts = enumerate_points(rz.scheme(), &over_a, cfg.point_budget, cfg.strategy)?;
    let n = x.nvars();
    let nd = rx.scheme().nvars();
    let size = a.size();
    let mut failures = Vec::new();
    for alpha in &pts.points {
        let zt = pack(rz, size, alpha);
        let t_rx = linear::kernel(a, &jacobian_at(rx.scheme(), &over_a, alpha), nd);
        let t_rz = linear::kernel(a, &jacobian_at(rz.scheme(), &over_a, alpha), nd);
        let unpack_all = |vs: Vec<Vec<u32>>| -> Vec<Vec<u32>> { vs.iter().map(|v| unpack(rx, size, v)).collect() };
        let t_x = unpack_all(linear::kernel(al.ring(), &jacobian_at(x, &al, &zt), n));
        let t_z = unpack_all(linear::kernel(al.ring(), &jacobian_at(z, &al, &zt), n));
        let normal = t_rx.len() as i64 - t_rz.len() as i64;
        if !linear::same_span(a, &t_x, &t_rx) {
            failures.push(format!("T X and T R(X) differ at {alpha:?}"));
        } else if !linear::same_span(a, &t_z, &t_rz) {
            failures.push(format!("T Z and T R(Z) differ at {alpha:?}"));
        } else if expected.is_some_and(|c| normal != (c * a.dim()) as i64) {
            failures.push(format!("normal rank {} at {alpha:?}", normal as f64 / a.dim() as f64));
        }
        if failures.len() >= 5 {
            break;
        }
    }
    Ok(FiberwiseResult {
        algebra: a.name().to_string(),
        points: pts.len(),
        normal_rank: expected,
        check: Check::new(format!("normal spaces correspond over {}", a.name()), failures),
    })
}
