use std::sync::Arc;

use serde::Serialize;

use super::restrict::{restrict_scheme, Expansion};
use crate::error::Result;
use crate::poly::{det, Poly, PolyMatrix};
use crate::report::{all_passed, checked_morphism, composite_check, Check};
use crate::scheme::{distinguished_open, AffineScheme};

/// Matrix over `k[x_{i,j}]` of multiplication by `Σ_j p_j t^j` on the free
/// module with basis `1, t, ..., t^{d-1}`; column `j` holds the coordinates
/// of `p · t^j`.
pub fn multiplication_matrix(e: &Expansion, components: &[Poly]) -> PolyMatrix {
    let l = e.algebra();
    let d = l.degree();
    let ring = e.k_ring();
    let mut m = vec![vec![Poly::zero(ring); d]; d];
    for (a, pa) in components.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        let ta = l.mult_matrix(&l.basis_element(a));
        for r in 0..d {
            for j in 0..d {
                let c = &ta[r][j];
                if !l.base().is_zero(c) {
                    m[r][j] = &m[r][j] + &pa.scale(&ring.coef().from_base(c.clone()));
                }
            }
        }
    }
    m
}

/// `N(p) = det` of the multiplication matrix of the expanded `p`.
pub fn norm_of(e: &Expansion, components: &[Poly]) -> Poly {
    det(e.k_ring(), &multiplication_matrix(e, components))
}

/// First column of the adjugate: `(-1)^r` times the minor deleting row `0`
/// and column `r`.
fn adjugate_first_column(e: &Expansion, m: &PolyMatrix) -> Vec<Poly> {
    let d = m.len();
    (0..d)
        .map(|r| {
            let minor: PolyMatrix = (1..d)
                .map(|i| (0..d).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                .collect();
            let v = det(e.k_ring(), &minor);
            if r % 2 == 0 {
                v
            } else {
                -&v
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NormOpenReport {
    pub norm: String,
    pub checks: Vec<Check>,
}

impl NormOpenReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// `R(D(g)) ≅ D(N(g)) ⊂ R(X)`. The forward map sends the inverse coordinate
/// to `N(y)`, the backward map sends `y_j` to `w · adj(M_g)_{j,0}`.
pub fn restrict_open(x: &Arc<AffineScheme>, g: &Poly, cap: u32) -> Result<(Poly, NormOpenReport)> {
    let rx = restrict_scheme(x, cap)?;
    let e = rx.expansion();
    let g_comps = e.expand(g)?;
    let m = multiplication_matrix(e, &g_comps);
    let norm = det(e.k_ring(), &m);

    let (u, _) = distinguished_open(x, g)?;
    let ru = restrict_scheme(&u, cap)?;
    let (target, _) = distinguished_open(rx.scheme(), &norm)?;

    let n = x.nvars();
    let d = e.degree();
    let eu = ru.expansion();
    let y_comps: Vec<Poly> = (0..d).map(|j| ru.scheme().var(eu.index(n, j))).collect();
    let norm_y = norm_of(eu, &y_comps);
    let mut fwd_images: Vec<Poly> = (0..n * d).map(|v| ru.scheme().var(v)).collect();
    fwd_images.push(norm_y);
    let (fwd, c1) = checked_morphism("R(D(g)) -> D(N(g))", ru.scheme(), &target, fwd_images, cap)?;

    let nv = target.nvars();
    let w = target.var(nv - 1);
    let positions: Vec<usize> = (0..n * d).collect();
    let adj = adjugate_first_column(e, &m);
    let mut back_images: Vec<Poly> = (0..n * d).map(|v| target.var(v)).collect();
    for a in adj {
        back_images.push(&w * &a.relabel(target.ring(), &positions));
    }
    let (back, c2) = checked_morphism("D(N(g)) -> R(D(g))", &target, ru.scheme(), back_images, cap)?;
    let mut checks = vec![c1, c2];
    if let (Some(f), Some(b)) = (fwd, back) {
        checks.push(composite_check("backward . forward = id", &f, &b, cap)?);
        checks.push(composite_check("forward . backward = id", &b, &f, cap)?);
    }
    let report = NormOpenReport {
        norm: norm.to_string(),
        checks,
    };
    Ok((norm, report))
}
