use std::sync::Arc;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::points::{enumerate_points, evaluate, linear, FiniteRing, PointRing};
use crate::poly::{mat_mul, Poly, PolyMatrix};
use crate::report::{all_passed, composite_check, Check};
use crate::scheme::{fresh_name, AffineScheme, Morphism};

/// A vector bundle on an affine scheme: the image of an idempotent matrix
/// over its coordinate ring.
#[derive(Clone, Debug)]
pub struct Bundle {
    base: Arc<AffineScheme>,
    matrix: PolyMatrix,
    rank: usize,
}

impl Bundle {
    pub fn base(&self) -> &Arc<AffineScheme> {
        &self.base
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    /// Size `N` of the ambient free module.
    pub fn ambient(&self) -> usize {
        self.matrix.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The free bundle of rank `r`, presented by the identity.
    pub fn free(base: &Arc<AffineScheme>, r: usize) -> Self {
        let ring = base.ring();
        let matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Poly::one(ring) } else { Poly::zero(ring) })
                    .collect()
            })
            .collect();
        Bundle {
            base: base.clone(),
            matrix,
            rank: r,
        }
    }

    pub fn display_matrix(&self) -> Vec<Vec<String>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(Poly::to_string).collect())
            .collect()
    }
}

/// The smallest finite ring over which points of `x` make sense: the
/// coefficient algebra itself, with `t ↦ t`.
pub fn coefficient_point_ring(x: &AffineScheme) -> Result<PointRing> {
    let c = x.coef();
    let ring = Arc::new(FiniteRing::from_etale(c)?);
    let t = if c.is_trivial() { 0 } else { ring.basis_index(1) };
    PointRing::new(ring, c.clone(), t)
}

/// `F_p`-dimension of the image of `P` evaluated at `point`, divided by the
/// dimension of the ring. Over a product of fields this is the common rank
/// on each factor when that rank is constant.
pub fn rank_at(matrix: &PolyMatrix, pr: &PointRing, point: &[u32]) -> (usize, usize) {
    let ring = pr.ring();
    let n = matrix.len();
    let m: Vec<Vec<u32>> = matrix
        .iter()
        .map(|row| row.iter().map(|e| evaluate(e, pr, point)).collect())
        .collect();
    let a = linear::fp_matrix(ring, &m, n);
    let k = crate::algebra::BaseField::Prime(ring.characteristic());
    let r = if a.is_empty() { 0 } else { crate::algebra::linalg::rank(&k, &a) };
    (r / ring.dim(), r % ring.dim())
}

/// Rank of `P` at every point of the base with values in `pr`.
pub fn rank_check(bundle: &Bundle, pr: &PointRing, cfg: &Config) -> Result<(usize, Check)> {
    let pts = enumerate_points(bundle.base(), pr, cfg.point_budget, cfg.strategy)?;
    let failures: Vec<String> = pts
        .points
        .iter()
        .filter_map(|p| {
            let (r, rem) = rank_at(bundle.matrix(), pr, p);
            (r != bundle.rank() || rem != 0).then(|| format!("rank {r} at {p:?}"))
        })
        .take(5)
        .collect();
    let name = format!("rank {} at every point over {}", bundle.rank(), pr.ring().name());
    Ok((pts.len(), Check::new(name, failures)))
}

/// Validates `P² = P` modulo the ideal of `x` and the rank of `P`: at every
/// point over the coefficient algebra for finite base fields, and through
/// `trace(P) = r` in characteristic zero.
pub fn make_bundle(x: &Arc<AffineScheme>, matrix: PolyMatrix, rank: usize, cfg: &Config) -> Result<Bundle> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("the bundle matrix must be square".into()));
    }
    if matrix.iter().flatten().any(|e| **e.ring() != **x.ring()) {
        return Err(Error::RingMismatch("matrix entries must be functions on the base".into()));
    }
    let cap = cfg.gb_degree_cap;
    let sq = mat_mul(x.ring(), &matrix, &matrix);
    for (i, row) in sq.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let residue = x.normal_form(&(e - &matrix[i][j]), cap)?;
            if !residue.is_zero() {
                return Err(Error::NotIdempotent {
                    row: i,
                    col: j,
                    residue: residue.to_string(),
                });
            }
        }
    }
    let bundle = Bundle {
        base: x.clone(),
        matrix,
        rank,
    };
    if x.base_field().is_finite() {
        let pr = coefficient_point_ring(x)?;
        let pts = enumerate_points(x, &pr, cfg.point_budget, cfg.strategy)?;
        for p in &pts.points {
            let (found, rem) = rank_at(&bundle.matrix, &pr, p);
            if found != rank || rem != 0 {
                return Err(Error::RankMismatch {
                    point: p.iter().map(|&c| pr.ring().display(c)).collect(),
                    expected: rank,
                    found,
                });
            }
        }
    } else {
        let ring = x.ring();
        let trace = (0..n).fold(Poly::zero(ring), |acc, i| &acc + &bundle.matrix[i][i]);
        let residue = x.normal_form(&(&trace - &Poly::from_i64(ring, rank as i64)), cap)?;
        if !residue.is_zero() {
            return Err(Error::RankMismatch {
                point: vec!["generic".into()],
                expected: rank,
                found: constant_rank(&x.normal_form(&trace, cap)?),
            });
        }
    }
    Ok(bundle)
}

/// The value of a constant trace as a rank, or `0` when it is not a
/// nonnegative integer constant.
fn constant_rank(trace: &Poly) -> usize {
    use num_traits::ToPrimitive;
    match trace.constant_value().map(|c| c.0[0].clone()) {
        Some(crate::algebra::Scalar::Rat(q)) if q.is_integer() => q.to_integer().to_usize().unwrap_or(0),
        Some(crate::algebra::Scalar::Mod(m)) => m as usize,
        _ => 0,
    }
}

/// `Spec Sym` of the dual: the base variables followed by fiber coordinates
/// `v1..vN` with the linear relations `(I − P) v = 0`.
#[derive(Clone, Debug)]
pub struct TotalSpace {
    pub scheme: Arc<AffineScheme>,
    pub zero_section: Morphism,
    pub projection: Morphism,
    pub checks: Vec<Check>,
}

impl TotalSpace {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }

    /// Indices of the fiber coordinates.
    pub fn fiber_vars(&self) -> std::ops::Range<usize> {
        self.projection.target().nvars()..self.scheme.nvars()
    }
}

pub fn total_space(e: &Bundle, cfg: &Config) -> Result<TotalSpace> {
    let x = e.base();
    let n = x.nvars();
    let mut names: Vec<String> = x.vars().to_vec();
    for i in 0..e.ambient() {
        let name = fresh_name(&format!("v{}", i + 1), &names);
        names.push(name);
    }
    let (ring, mut gens) = x.extend_vars(&names[n..]);
    let positions: Vec<usize> = (0..n).collect();
    for (i, row) in e.matrix().iter().enumerate() {
        let mut rel = Poly::var(&ring, n + i);
        for (j, pij) in row.iter().enumerate() {
            rel = &rel - &(&pij.relabel(&ring, &positions) * &Poly::var(&ring, n + j));
        }
        if !rel.is_zero() {
            gens.push(rel);
        }
    }
    let scheme = Arc::new(AffineScheme::new(ring, gens)?);
    let cap = cfg.gb_degree_cap;
    let mut zero_images: Vec<Poly> = (0..n).map(|i| x.var(i)).collect();
    zero_images.extend((0..e.ambient()).map(|_| Poly::zero(x.ring())));
    let zero_section = Morphism::new(x.clone(), scheme.clone(), zero_images, cap)?;
    let projection = Morphism::new(scheme.clone(), x.clone(), (0..n).map(|i| scheme.var(i)).collect(), cap)?;
    let checks = vec![composite_check(
        "projection . zero section = id",
        &zero_section,
        &projection,
        cap,
    )?];
    Ok(TotalSpace {
        scheme,
        zero_section,
        projection,
        checks,
    })
}
