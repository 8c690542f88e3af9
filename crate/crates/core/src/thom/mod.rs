//! Thom spaces `E/(E ∖ Z)` seen through their points over local test
//! algebras, and the point-level comparison of Thom spaces under Weil
//! restriction.

use std::sync::Arc;

use serde::Serialize;

use crate::bundle::{normal_presentation, restrict_bundle, total_space, Bundle};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::points::{
    enumerate_points, linear, pack, CompiledPoly, tensor_point_ring, unpack, Elem, FiniteRing, PointRing, PointSet,
};
use crate::poly::Poly;
use crate::report::{all_passed, Check};
use crate::scheme::AffineScheme;
use crate::weilres::{restrict_scheme, Restriction};

/// A scheme `E` with a closed subscheme `Z = V(h_1..h_c)`; for total spaces
/// of bundles `Z` is the zero section and points are found fiber by fiber.
#[derive(Clone, Debug)]
pub struct ThomPresentation {
    total: Arc<AffineScheme>,
    zero_locus: Vec<Poly>,
    bundle: Option<Bundle>,
}

impl ThomPresentation {
    pub fn new(total: Arc<AffineScheme>, zero_locus: Vec<Poly>) -> Result<Self> {
        if zero_locus.iter().any(|h| **h.ring() != **total.ring()) {
            return Err(Error::RingMismatch("equations of Z must be functions on E".into()));
        }
        Ok(ThomPresentation {
            total,
            zero_locus,
            bundle: None,
        })
    }

    /// The total space of `e` with its zero section.
    pub fn of_bundle(e: &Bundle, cfg: &Config) -> Result<Self> {
        let ts = total_space(e, cfg)?;
        let zero_locus = ts.fiber_vars().map(|i| ts.scheme.var(i)).collect();
        Ok(ThomPresentation {
            total: ts.scheme,
            zero_locus,
            bundle: Some(e.clone()),
        })
    }

    pub fn total(&self) -> &Arc<AffineScheme> {
        &self.total
    }

    pub fn zero_locus(&self) -> &[Poly] {
        &self.zero_locus
    }

    /// `E(A)`, sorted.
    pub fn points(&self, pr: &PointRing, cfg: &Config) -> Result<PointSet> {
        match &self.bundle {
            Some(e) => bundle_points(e, &self.total, pr, cfg),
            None => enumerate_points(&self.total, pr, cfg.point_budget, cfg.strategy),
        }
    }
}

/// Points of a total space as pairs of a base point `x` and a vector in the
/// kernel of `I − P(x)`.
pub fn bundle_points(e: &Bundle, total: &AffineScheme, pr: &PointRing, cfg: &Config) -> Result<PointSet> {
    let base = enumerate_points(e.base(), pr, cfg.point_budget, cfg.strategy)?;
    let ring = pr.ring();
    let n = e.ambient();
    let compiled: Vec<Vec<CompiledPoly>> = e
        .matrix()
        .iter()
        .map(|row| row.iter().map(|p| CompiledPoly::new(p, pr)).collect())
        .collect();
    let mut evaluated = base.evaluated;
    let mut points = Vec::new();
    for x in &base.points {
        let m: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let pij = compiled[i][j].eval(ring, x);
                        if i == j { ring.sub(ring.one(), pij) } else { ring.neg(pij) }
                    })
                    .collect()
            })
            .collect();
        let basis = linear::kernel(ring, &m, n);
        evaluated += (ring.characteristic()).saturating_pow(basis.len() as u32);
        if evaluated > cfg.point_budget {
            return Err(Error::BudgetExceeded { budget: cfg.point_budget });
        }
        // base points arrive sorted, so sorting each fiber sorts the whole set
        let mut fiber = linear::span_elements(ring, &basis, n);
        fiber.sort_unstable();
        points.extend(fiber.into_iter().map(|v| {
            let mut p = x.clone();
            p.extend(v);
            p
        }));
    }
    Ok(PointSet {
        vars: total.vars().to_vec(),
        ring: ring.name().to_string(),
        points,
        evaluated,
    })
}

/// Points of `E(A)` sorted into the basepoint class and the classes of
/// points lying over `Z`.
#[derive(Clone, Debug, Serialize)]
pub struct ThomClasses {
    pub algebra: String,
    pub points: usize,
    /// Points that are their own class: no equation of `Z` is a unit.
    #[serde(skip)]
    pub classes: Vec<Vec<Elem>>,
    /// Points identified with the basepoint.
    #[serde(skip)]
    pub collapsed: Vec<Vec<Elem>>,
}

impl ThomClasses {
    /// Classes including the formal basepoint.
    pub fn class_count(&self) -> usize {
        self.classes.len() + 1
    }

    pub fn is_class(&self, p: &[Elem]) -> bool {
        self.classes.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }
}

/// Over a local ring a point collapses to the basepoint iff some equation of
/// `Z` evaluates to a unit.
pub struct Collapse<'a> {
    pr: &'a PointRing,
    equations: Vec<CompiledPoly>,
}

impl<'a> Collapse<'a> {
    pub fn new(pres: &ThomPresentation, pr: &'a PointRing) -> Self {
        Collapse {
            pr,
            equations: pres.zero_locus.iter().map(|h| CompiledPoly::new(h, pr)).collect(),
        }
    }

    pub fn test(&self, point: &[Elem]) -> bool {
        let ring = self.pr.ring();
        self.equations.iter().any(|h| ring.is_unit(h.eval(ring, point)))
    }
}

pub fn thom_points(pres: &ThomPresentation, pr: &PointRing, cfg: &Config) -> Result<ThomClasses> {
    if !pr.ring().is_local() {
        return Err(Error::NotLocalAlgebra);
    }
    let all = pres.points(pr, cfg)?;
    let collapse = Collapse::new(pres, pr);
    let (collapsed, classes): (Vec<_>, Vec<_>) = all.points.into_iter().partition(|p| collapse.test(p));
    Ok(ThomClasses {
        algebra: pr.ring().name().to_string(),
        points: classes.len() + collapsed.len(),
        classes,
        collapsed,
    })
}

/// The two Thom presentations compared under restriction, with the layout
/// shared by `R(Tot E)` and `Tot R(E)`.
struct Sides {
    over_l: ThomPresentation,
    over_k: ThomPresentation,
    layout: Restriction,
}

fn sides(e: &Bundle, cfg: &Config) -> Result<Sides> {
    let over_l = ThomPresentation::of_bundle(e, cfg)?;
    let rb = restrict_bundle(e, cfg)?;
    let over_k = ThomPresentation::of_bundle(&rb.bundle, cfg)?;
    let layout = restrict_scheme(over_l.total(), cfg.gb_degree_cap)?;
    Ok(Sides { over_l, over_k, layout })
}

/// `A` and `A ⊗ L` as point rings, both required local.
fn local_pair(a: &Arc<FiniteRing>, e: &Bundle) -> Result<(PointRing, PointRing)> {
    if !a.is_local() {
        return Err(Error::NotLocalAlgebra);
    }
    let al = tensor_point_ring(a, e.base().coef())?;
    if !al.ring().is_local() {
        return Err(Error::NonLocalTensor);
    }
    let k = Arc::new(crate::algebra::EtaleAlgebra::trivial(e.base().base_field()));
    Ok((PointRing::over_base(a.clone(), k)?, al))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThomCompareReport {
    pub algebra: String,
    pub tensor: String,
    /// Classes of `Th(R(E))` over `A`, basepoint included.
    pub restricted_classes: usize,
    /// Classes of `Th(E)` over `A ⊗ L`, basepoint included.
    pub classes: usize,
    pub restricted_collapsed: usize,
    pub collapsed: usize,
    pub checks: Vec<Check>,
}

impl ThomCompareReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

fn witnesses<'a>(it: impl Iterator<Item = &'a Vec<Elem>>) -> Vec<String> {
    it.take(5).map(|p| format!("{p:?}")).collect()
}

/// The adjunction on points, `α ↦ α̃`, as a map of pointed class sets
/// `Th(R(E))(A) → Th(E)(A ⊗ L)`: it must send classes bijectively onto
/// classes and collapsed points to collapsed points.
pub fn thom_compare(e: &Bundle, a: &Arc<FiniteRing>, cfg: &Config) -> Result<ThomCompareReport> {
    let (ka, al) = local_pair(a, e)?;
    let s = sides(e, cfg)?;
    let right = thom_points(&s.over_l, &al, cfg)?;
    let left = thom_points(&s.over_k, &ka, cfg)?;
    let size = a.size();
    let phi = |p: &Vec<Elem>| pack(&s.layout, size, p);
    let collapse = Collapse::new(&s.over_l, &al);
    let mut checks = vec![
        Check::new(
            "classes map to classes",
            witnesses(left.classes.iter().filter(|p| !right.is_class(&phi(p)))),
        ),
        Check::new(
            "every class is hit",
            witnesses(
                right
                    .classes
                    .iter()
                    .filter(|q| left.classes.binary_search(&unpack(&s.layout, size, q)).is_err()),
            ),
        ),
        Check::new(
            "basepoint is preserved",
            witnesses(left.collapsed.iter().filter(|p| {
                let q = phi(p);
                !collapse.test(&q) || right.collapsed.binary_search(&q).is_err()
            })),
        ),
    ];
    checks.push(if left.class_count() == right.class_count() && left.collapsed.len() == right.collapsed.len() {
        Check::pass("class counts agree")
    } else {
        Check::fail(
            "class counts agree",
            format!("{} vs {}", left.class_count(), right.class_count()),
        )
    });
    Ok(ThomCompareReport {
        algebra: a.name().to_string(),
        tensor: al.ring().name().to_string(),
        restricted_classes: left.class_count(),
        classes: right.class_count(),
        restricted_collapsed: left.collapsed.len(),
        collapsed: right.collapsed.len(),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Step2Report {
    pub algebra: String,
    pub points: usize,
    /// Points of `R(E)(A)` that factor through the complement of `R(Z)`.
    pub complement: usize,
    pub checks: Vec<Check>,
}

impl Step2Report {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// For every `φ ∈ R(E)(A)`: `φ` lands in the complement of the restricted
/// zero section iff its adjoint lands in the complement of the zero section.
pub fn step2_check(e: &Bundle, a: &Arc<FiniteRing>, cfg: &Config) -> Result<Step2Report> {
    let (ka, al) = local_pair(a, e)?;
    let s = sides(e, cfg)?;
    let pts = s.over_k.points(&ka, cfg)?;
    let size = a.size();
    let (on_k, on_l) = (Collapse::new(&s.over_k, &ka), Collapse::new(&s.over_l, &al));
    let mut complement = 0;
    let mut failures = Vec::new();
    for p in &pts.points {
        let left = on_k.test(p);
        let right = on_l.test(&pack(&s.layout, size, p));
        complement += usize::from(left);
        if left != right && failures.len() < 5 {
            failures.push(format!("{p:?}: {left} vs {right}"));
        }
    }
    Ok(Step2Report {
        algebra: a.name().to_string(),
        points: pts.len(),
        complement,
        checks: vec![Check::new("complement membership agrees with the adjoint", failures)],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NaturalityReport {
    pub small: String,
    pub big: String,
    pub checks: Vec<Check>,
}

impl NaturalityReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Compatibility of the class bijections with the inclusion `F_p ⊂ B`.
pub fn thom_naturality(e: &Bundle, big: &Arc<FiniteRing>, cfg: &Config) -> Result<NaturalityReport> {
    let p = big.characteristic();
    let small = Arc::new(FiniteRing::prime_field(p)?);
    let (ks, als) = local_pair(&small, e)?;
    let (kb, alb) = local_pair(big, e)?;
    let s = sides(e, cfg)?;
    let left_s = thom_points(&s.over_k, &ks, cfg)?;
    let left_b = thom_points(&s.over_k, &kb, cfg)?;
    let right_s = thom_points(&s.over_l, &als, cfg)?;
    let right_b = thom_points(&s.over_l, &alb, cfg)?;
    // F_p ⊂ B sends c to c·1, which has index c; on A ⊗ L each t-component moves
    let lift = |x: Elem| -> Elem {
        let (mut rest, mut out, mut place) = (x, 0, 1);
        while rest > 0 {
            out += (rest % p as Elem) * place;
            rest /= p as Elem;
            place *= big.size();
        }
        out
    };
    let mut failures = Vec::new();
    for a in &left_s.classes {
        if !left_b.is_class(a) {
            failures.push(format!("{a:?} is not a class over {}", big.name()));
        }
        let via_small: Vec<Elem> = pack(&s.layout, p as Elem, a).into_iter().map(lift).collect();
        if pack(&s.layout, big.size(), a) != via_small || !right_b.is_class(&via_small) {
            failures.push(format!("square fails at {a:?}"));
        }
    }
    let collapsed_ok = left_s.collapsed.iter().all(|a| left_b.collapsed.binary_search(a).is_ok())
        && right_s
            .collapsed
            .iter()
            .all(|q| right_b.collapsed.binary_search(&q.iter().map(|&x| lift(x)).collect()).is_ok());
    let mut checks = vec![Check::new("classes and adjunction commute with the inclusion", failures)];
    checks.push(if collapsed_ok {
        Check::pass("inclusion preserves the basepoint")
    } else {
        Check::fail("inclusion preserves the basepoint", "a collapsed point stops collapsing")
    });
    Ok(NaturalityReport {
        small: small.name().to_string(),
        big: big.name().to_string(),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GysinReport {
    pub field: String,
    /// Classes of `Th(N_{Z/X})`, basepoint included.
    pub normal_classes: usize,
    /// Classes of `X/(X ∖ Z)`, basepoint included.
    pub quotient_classes: usize,
    pub checks: Vec<Check>,
}

impl GysinReport {
    pub fn verified(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// At points over the field `A ⊗ L`, `Th(N_{Z/X})` and `X/(X ∖ Z)` both have
/// classes `Z(F) ⊔ {∗}`; the zero section `z ↦ (z, 0)` matches them.
pub fn gysin_shadow(x: &Arc<AffineScheme>, hs: &[Poly], a: &Arc<FiniteRing>, cfg: &Config) -> Result<GysinReport> {
    let al = tensor_point_ring(a, x.coef())?;
    let f = al.ring();
    if f.elements().filter(|&u| f.is_unit(u)).count() + 1 != f.size() as usize {
        return Err(if f.is_local() { Error::Invalid(format!("{} is not a field", f.name())) } else { Error::NonLocalTensor });
    }
    let nb = normal_presentation(x, hs, cfg)?;
    let normal = thom_points(&ThomPresentation::of_bundle(&nb.bundle, cfg)?, &al, cfg)?;
    let quotient = thom_points(&ThomPresentation::new(x.clone(), hs.to_vec())?, &al, cfg)?;
    let n = x.nvars();
    let zero_fiber = normal.classes.iter().filter(|p| p[n..].iter().any(|&v| v != 0)).count();
    let mut projected: Vec<Vec<Elem>> = normal.classes.iter().map(|p| p[..n].to_vec()).collect();
    projected.dedup();
    let checks = vec![
        Check::new(
            "classes of Th(N) lie on the zero section",
            (zero_fiber > 0).then(|| format!("{zero_fiber} classes off the zero section")).into_iter().collect(),
        ),
        if projected == quotient.classes {
            Check::pass("zero section matches the classes")
        } else {
            Check::fail(
                "zero section matches the classes",
                format!("{} vs {}", projected.len(), quotient.classes.len()),
            )
        },
    ];
    Ok(GysinReport {
        field: f.name().to_string(),
        normal_classes: normal.class_count(),
        quotient_classes: quotient.class_count(),
        checks,
    })
}

#[cfg(test)]
mod tests;
