use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::enumerate::{enumerate_points, evaluate, PointRing, PointSet};
use super::linear::{kernel, span_elements};
use super::ring::{Elem, FiniteRing};
use crate::algebra::{is_prime, EtaleAlgebra, GaloisGroup};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::{all_passed, Check};
use crate::scheme::{distinguished_open, AffineScheme};
use crate::weilres::{restrict_open, restrict_scheme, twist, Restriction};

/// A finite test algebra over the base field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TestAlgebra {
    /// `F_{p^s}`.
    Field { p: u64, s: u32 },
    /// `F_{p^s}[ε]/(ε²)`.
    Dual { p: u64, s: u32 },
    /// The étale algebra `L` itself.
    Etale,
}

impl TestAlgebra {
    /// `F_q`, for a prime power `q`.
    pub fn field(q: u64) -> Result<Self> {
        let (p, s) = prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        Ok(TestAlgebra::Field { p, s })
    }

    pub fn dual(q: u64) -> Result<Self> {
        let (p, s) = prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        Ok(TestAlgebra::Dual { p, s })
    }

    /// The ring, with `l` standing in for [`TestAlgebra::Etale`].
    pub fn build(&self, l: &EtaleAlgebra) -> Result<FiniteRing> {
        match *self {
            TestAlgebra::Field { p, s } => FiniteRing::finite_field(p, s),
            TestAlgebra::Dual { p, s } => FiniteRing::finite_field(p, s)?.dual_numbers(),
            TestAlgebra::Etale => FiniteRing::from_etale(l),
        }
    }

    pub fn is_local(&self) -> bool {
        !matches!(self, TestAlgebra::Etale)
    }
}

impl fmt::Display for TestAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestAlgebra::Field { p, s } => write!(f, "GF({})", p.pow(*s)),
            TestAlgebra::Dual { p, s } => write!(f, "GF({})[eps]", p.pow(*s)),
            TestAlgebra::Etale => f.write_str("L"),
        }
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    if !is_prime(p) {
        return None;
    }
    let mut s = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        s += 1;
    }
    (r == 1).then_some((p, s))
}

/// `A ⊗_k L` as an `L`-algebra via `t ↦ 1 ⊗ t`. Element `Σ_j a_j ⊗ t^j` has
/// index `Σ_j a_j |A|^j`.
pub fn tensor_point_ring(a: &FiniteRing, l: &Arc<EtaleAlgebra>) -> Result<PointRing> {
    if l.is_trivial() {
        let ring = a.tensor(&FiniteRing::from_etale(l)?, a.name())?;
        return PointRing::over_base(Arc::new(ring), l.clone());
    }
    let lr = FiniteRing::from_etale(l)?;
    let ring = a.tensor(&lr, format!("{} ⊗ L", a.name()))?;
    PointRing::new(Arc::new(ring), l.clone(), a.size())
}

/// `α ∈ R(X)(A)` as the point `(Σ_j α(x_{i,j}) ⊗ t^j)_i` of `X(A ⊗ L)`.
pub fn pack(r: &Restriction, a_size: u32, alpha: &[Elem]) -> Vec<Elem> {
    let e = r.expansion();
    (0..r.source().nvars())
        .map(|i| {
            (0..e.degree())
                .map(|j| alpha[e.index(i, j)] * a_size.pow(j as u32))
                .sum()
        })
        .collect()
}

/// Inverse of [`pack`].
pub fn unpack(r: &Restriction, a_size: u32, x: &[Elem]) -> Vec<Elem> {
    let e = r.expansion();
    let mut alpha = vec![0; r.scheme().nvars()];
    for (i, &xi) in x.iter().enumerate() {
        let mut rest = xi;
        for j in 0..e.degree() {
            alpha[e.index(i, j)] = rest % a_size;
            rest /= a_size;
        }
    }
    alpha
}

fn base_ring(a: &Arc<FiniteRing>, x: &AffineScheme) -> Result<PointRing> {
    PointRing::over_base(a.clone(), x.coef().clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub algebra: String,
    pub tensor: String,
    /// `|R(X)(A)|`.
    pub left: usize,
    /// `|X(A ⊗ L)|`.
    pub right: usize,
    pub checks: Vec<Check>,
}

impl AdjunctionReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Enumerates `R(X)(A)` and `X(A ⊗ L)` independently and checks that packing
/// coordinates is a bijection between them.
pub fn adjunction_bijection(x: &Arc<AffineScheme>, a: &Arc<FiniteRing>, cfg: &Config) -> Result<AdjunctionReport> {
    let r = restrict_scheme(x, cfg.gb_degree_cap)?;
    let left = enumerate_points(r.scheme(), &base_ring(a, r.scheme())?, cfg.point_budget, cfg.strategy)?;
    let al = tensor_point_ring(a, x.coef())?;
    let right = enumerate_points(x, &al, cfg.point_budget, cfg.strategy)?;
    Ok(compare_packed(&r, a, &left, &right, al.ring().name()))
}

fn compare_packed(r: &Restriction, a: &FiniteRing, left: &PointSet, right: &PointSet, tensor: &str) -> AdjunctionReport {
    let n = a.size();
    let outside: Vec<String> = left
        .points
        .iter()
        .filter(|p| !right.contains(&pack(r, n, p)))
        .take(5)
        .map(|p| format!("{p:?}"))
        .collect();
    let missed: Vec<String> = right
        .points
        .iter()
        .filter(|q| !left.contains(&unpack(r, n, q)))
        .take(5)
        .map(|q| format!("{q:?}"))
        .collect();
    let mut checks = vec![
        Check::new("every point of R(X)(A) maps into X(A ⊗ L)", outside),
        Check::new("every point of X(A ⊗ L) comes from R(X)(A)", missed),
    ];
    checks.push(if left.len() == right.len() {
        Check::pass("counts agree")
    } else {
        Check::fail("counts agree", format!("{} vs {}", left.len(), right.len()))
    });
    AdjunctionReport {
        algebra: a.name().to_string(),
        tensor: tensor.to_string(),
        left: left.len(),
        right: right.len(),
        checks,
    }
}

/// The Jacobian of the generators of `x` evaluated at `point`.
pub fn jacobian_at(x: &AffineScheme, pr: &PointRing, point: &[Elem]) -> Vec<Vec<Elem>> {
    x.generators()
        .iter()
        .map(|g| (0..x.nvars()).map(|v| evaluate(&g.derivative(v), pr, point)).collect())
        .collect()
}

/// Every point of `x` over `pr` paired with every vector in the kernel of the
/// Jacobian there, written as points over the dual numbers `a + vε`.
pub fn tangent_points(x: &AffineScheme, pr: &PointRing, cfg: &Config) -> Result<PointSet> {
    let base = enumerate_points(x, pr, cfg.point_budget, cfg.strategy)?;
    let ring = pr.ring();
    let size = ring.size();
    let mut points = Vec::new();
    let mut evaluated = base.evaluated;
    for p in &base.points {
        let basis = kernel(ring, &jacobian_at(x, pr, p), x.nvars());
        let count = ring.characteristic().saturating_pow(basis.len() as u32);
        evaluated += count;
        if evaluated > cfg.point_budget {
            return Err(Error::BudgetExceeded { budget: cfg.point_budget });
        }
        for v in span_elements(ring, &basis, x.nvars()) {
            points.push(p.iter().zip(&v).map(|(&a, &b)| a + b * size).collect());
        }
    }
    points.sort();
    Ok(PointSet {
        vars: x.vars().to_vec(),
        ring: format!("{}[eps]", ring.name()),
        points,
        evaluated,
    })
}

/// The dual numbers over `pr`, with the same structure map.
pub fn dual_point_ring(pr: &PointRing) -> Result<PointRing> {
    let d = pr.ring().dual_numbers()?;
    PointRing::new(Arc::new(d), pr.coef().clone(), pr.t_image())
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub ring: String,
    pub base_points: usize,
    pub tangent_points: usize,
    pub checks: Vec<Check>,
}

impl TangentReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Tangent vectors from Jacobian kernels against direct enumeration over the
/// dual numbers.
pub fn tangent_cross_check(x: &AffineScheme, pr: &PointRing, cfg: &Config) -> Result<TangentReport> {
    let from_jacobian = tangent_points(x, pr, cfg)?;
    let direct = enumerate_points(x, &dual_point_ring(pr)?, cfg.point_budget, cfg.strategy)?;
    let base = enumerate_points(x, pr, cfg.point_budget, cfg.strategy)?;
    let check = if from_jacobian.points == direct.points {
        Check::pass("Jacobian kernels match dual-number points")
    } else {
        Check::fail(
            "Jacobian kernels match dual-number points",
            format!("{} vs {}", from_jacobian.len(), direct.len()),
        )
    };
    Ok(TangentReport {
        ring: pr.ring().name().to_string(),
        base_points: base.len(),
        tangent_points: direct.len(),
        checks: vec![check],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormOpenPoints {
    pub algebra: String,
    /// `|R(D(g))(A)|`.
    pub restricted_open: usize,
    /// Points of `R(X)(A)` where `N(g)` is a unit.
    pub norm_locus: usize,
    /// Points of `X(A ⊗ L)` where `g` is a unit.
    pub tensor_locus: usize,
    pub checks: Vec<Check>,
}

impl NormOpenPoints {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Counts `R(D(g))` three ways over `A`.
pub fn norm_open_points(x: &Arc<AffineScheme>, g: &Poly, a: &Arc<FiniteRing>, cfg: &Config) -> Result<NormOpenPoints> {
    let cap = cfg.gb_degree_cap;
    let (u, _) = distinguished_open(x, g)?;
    let ru = restrict_scheme(&u, cap)?;
    let over_a = base_ring(a, ru.scheme())?;
    let restricted_open = enumerate_points(ru.scheme(), &over_a, cfg.point_budget, cfg.strategy)?.len();

    let rx = restrict_scheme(x, cap)?;
    let (norm, _) = restrict_open(x, g, cap)?;
    let rx_points = enumerate_points(rx.scheme(), &over_a, cfg.point_budget, cfg.strategy)?;
    let norm_locus = rx_points
        .points
        .iter()
        .filter(|p| a.is_unit(evaluate(&norm, &over_a, p)))
        .count();

    let al = tensor_point_ring(a, x.coef())?;
    let x_points = enumerate_points(x, &al, cfg.point_budget, cfg.strategy)?;
    let tensor_locus = x_points
        .points
        .iter()
        .filter(|p| al.ring().is_unit(evaluate(g, &al, p)))
        .count();
    let agree = restricted_open == norm_locus && norm_locus == tensor_locus;
    let check = if agree {
        Check::pass("R(D(g)), D(N(g)) and D(g)(A ⊗ L) have equal counts")
    } else {
        Check::fail(
            "R(D(g)), D(N(g)) and D(g)(A ⊗ L) have equal counts",
            format!("{restricted_open}, {norm_locus}, {tensor_locus}"),
        )
    };
    Ok(NormOpenPoints {
        algebra: a.name().to_string(),
        restricted_open,
        norm_locus,
        tensor_locus,
        checks: vec![check],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisCount {
    /// `|R(X)(L)|`.
    pub restricted: usize,
    /// `|X^σ(L)|` for every automorphism.
    pub twists: Vec<usize>,
    pub product: usize,
    pub checks: Vec<Check>,
}

impl GaloisCount {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// `|R(X)(L)| = ∏_σ |X^σ(L)|`, from enumerations over `L` as a ring.
pub fn galois_point_count(x: &Arc<AffineScheme>, group: &GaloisGroup, cfg: &Config) -> Result<GaloisCount> {
    let l = group.algebra();
    let lr = Arc::new(FiniteRing::from_etale(l)?);
    let r = restrict_scheme(x, cfg.gb_degree_cap)?;
    let restricted = enumerate_points(r.scheme(), &base_ring(&lr, r.scheme())?, cfg.point_budget, cfg.strategy)?.len();
    let over_l = PointRing::new(lr.clone(), l.clone(), lr.basis_index(1.min(l.degree() - 1)))?;
    let twists = (0..group.order())
        .map(|s| Ok(enumerate_points(&twist(x, group, s)?, &over_l, cfg.point_budget, cfg.strategy)?.len()))
        .collect::<Result<Vec<usize>>>()?;
    let product = twists.iter().product();
    let check = if restricted == product {
        Check::pass("|R(X)(L)| = product of |X^σ(L)|")
    } else {
        Check::fail("|R(X)(L)| = product of |X^σ(L)|", format!("{restricted} vs {product}"))
    };
    Ok(GaloisCount {
        restricted,
        twists,
        product,
        checks: vec![check],
    })
}
