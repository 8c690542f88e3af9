use serde::Serialize;

use super::presentation::{make_bundle, total_space, Bundle, TotalSpace};
use crate::config::Config;
use crate::error::Result;
use crate::poly::{mat_mul, Poly, PolyMatrix};
use crate::report::{all_passed, Check};
use crate::weilres::{
    multiplication_matrix, positional_comparison, restrict_morphism, restrict_scheme, ComparisonReport, Restriction,
};

/// `R(E)` on `R(X)` with the checks made while building it.
#[derive(Clone, Debug)]
pub struct RestrictedBundle {
    pub restriction: Restriction,
    pub bundle: Bundle,
    pub total: TotalSpace,
    /// `Tot(R(E)) ≅ R(Tot(E))`.
    pub compat: ComparisonReport,
    pub checks: Vec<Check>,
}

impl RestrictedBundle {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks) && self.compat.verified() && self.total.verified()
    }
}

/// The `Nd × Nd` matrix over `O(R(X))` whose `(a, b)` block is the
/// multiplication matrix of the expanded entry `P_{ab}`. Fiber coordinate
/// `(b, j)` of the result is the `t^j`-component of fiber coordinate `b`.
pub fn block_matrix(e: &Bundle, rx: &Restriction) -> Result<PolyMatrix> {
    let ex = rx.expansion();
    let d = ex.degree();
    let n = e.ambient();
    let ring = rx.scheme().ring();
    let mut out = vec![vec![Poly::zero(ring); n * d]; n * d];
    for (a, row) in e.matrix().iter().enumerate() {
        for (b, entry) in row.iter().enumerate() {
            let m = multiplication_matrix(ex, &ex.expand(entry)?);
            for (r, mrow) in m.into_iter().enumerate() {
                for (j, v) in mrow.into_iter().enumerate() {
                    out[a * d + r][b * d + j] = v;
                }
            }
        }
    }
    Ok(out)
}

pub fn restrict_bundle(e: &Bundle, cfg: &Config) -> Result<RestrictedBundle> {
    let cap = cfg.gb_degree_cap;
    let rx = restrict_scheme(e.base(), cap)?;
    let d = rx.expansion().degree();
    let matrix = block_matrix(e, &rx)?;
    let rs = rx.scheme();
    let sq = mat_mul(rs.ring(), &matrix, &matrix);
    let mut failures = Vec::new();
    for (i, row) in sq.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let residue = rs.normal_form(&(v - &matrix[i][j]), cap)?;
            if !residue.is_zero() {
                failures.push(format!("entry ({i}, {j}): {residue}"));
            }
        }
    }
    let mut checks = vec![Check::new("P'^2 = P'", failures)];
    let bundle = make_bundle(rs, matrix, e.rank() * d, cfg)?;
    checks.push(Check::pass(format!("rank {} at every point over the base field", e.rank() * d)));
    let total = total_space(&bundle, cfg)?;
    let te = total_space(e, cfg)?;
    let rte = restrict_scheme(&te.scheme, cap)?;
    let compat = positional_comparison(&total.scheme, rte.scheme(), cap)?;
    Ok(RestrictedBundle {
        restriction: rx,
        bundle,
        total,
        compat,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSectionReport {
    pub coordinates: usize,
    pub checks: Vec<Check>,
}

impl ZeroSectionReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// `R(s_E)` and the zero section of `R(E)` agree coordinatewise modulo the
/// ideal of `R(X)`.
pub fn restrict_zero_section(e: &Bundle, cfg: &Config) -> Result<ZeroSectionReport> {
    let cap = cfg.gb_degree_cap;
    let rb = restrict_bundle(e, cfg)?;
    let te = total_space(e, cfg)?;
    let rte = restrict_scheme(&te.scheme, cap)?;
    let restricted = restrict_morphism(&te.zero_section, &rb.restriction, &rte, cap)?;
    let direct = &rb.total.zero_section;
    let rs = rb.restriction.scheme();
    let names = rb.total.scheme.vars();
    let mut failures = Vec::new();
    for (i, (a, b)) in restricted.images().iter().zip(direct.images()).enumerate() {
        let diff = rs.normal_form(&(a - b), cap)?;
        if !diff.is_zero() {
            failures.push(format!("{}: {a} vs {b}", names[i]));
        }
    }
    if restricted.images().len() != direct.images().len() {
        failures.push(format!(
            "{} vs {} coordinates",
            restricted.images().len(),
            direct.images().len()
        ));
    }
    Ok(ZeroSectionReport {
        coordinates: direct.images().len(),
        checks: vec![Check::new("R(zero section) = zero section of R(E)", failures)],
    })
}
