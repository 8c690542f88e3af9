use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use super::ring::{Elem, FiniteRing};
use crate::algebra::{AlgElem, EtaleAlgebra};
use crate::config::Strategy;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scheme::AffineScheme;

/// Local evaluation counts are flushed to the shared counter this often.
const FLUSH_EVERY: u64 = 4096;

/// A finite ring together with a ring map from the coefficient algebra of
/// the schemes evaluated in it, determined by the image of `t`.
#[derive(Clone, Debug)]
pub struct PointRing {
    ring: Arc<FiniteRing>,
    coef: Arc<EtaleAlgebra>,
    t_image: Elem,
}

impl PointRing {
    /// `coef`-algebra structure sending `t` to `t_image`; fails unless
    /// `f(t_image) = 0`.
    pub fn new(ring: Arc<FiniteRing>, coef: Arc<EtaleAlgebra>, t_image: Elem) -> Result<Self> {
        let k = coef.base();
        if k.characteristic() != ring.characteristic() || !k.is_finite() {
            return Err(Error::RingMismatch(format!("{ring} is not a {coef}-algebra")));
        }
        let pr = PointRing { ring, coef, t_image };
        let f = pr.coef.modulus();
        let value = f.iter().rev().fold(pr.ring.zero(), |acc, c| {
            pr.ring.add(pr.ring.mul(acc, pr.t_image), pr.ring.scale(k.residue(c), pr.ring.one()))
        });
        if pr.coef.is_trivial() || value == pr.ring.zero() {
            Ok(pr)
        } else {
            Err(Error::Invalid(format!("t ↦ {} is not a root of the modulus", pr.ring.display(t_image))))
        }
    }

    /// The ring as an algebra over the base field.
    pub fn over_base(ring: Arc<FiniteRing>, coef: Arc<EtaleAlgebra>) -> Result<Self> {
        if !coef.is_trivial() {
            return Err(Error::RingMismatch("expected the base field".into()));
        }
        Self::new(ring, coef, 0)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn coef(&self) -> &Arc<EtaleAlgebra> {
        &self.coef
    }

    pub fn t_image(&self) -> Elem {
        self.t_image
    }

    pub fn embed(&self, c: &AlgElem) -> Elem {
        let k = self.coef.base();
        let r = &self.ring;
        c.coords().iter().rev().fold(r.zero(), |acc, a| {
            r.add(r.mul(acc, self.t_image), r.scale(k.residue(a), r.one()))
        })
    }
}

/// A polynomial prepared for repeated evaluation in one [`PointRing`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Elem, Vec<(usize, u32)>)>,
    /// Largest variable index occurring, or `None` for constants.
    top: Option<usize>,
}

impl CompiledPoly {
    pub fn new(p: &Poly, pr: &PointRing) -> Self {
        let terms: Vec<(Elem, Vec<(usize, u32)>)> = p
            .terms()
            .iter()
            .map(|(exp, c)| {
                let vars = exp
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(v, e)| (v, *e))
                    .collect();
                (pr.embed(c), vars)
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        let top = terms.iter().filter_map(|(_, vars)| vars.last().map(|v| v.0)).max();
        CompiledPoly { terms, top }
    }

    pub fn eval(&self, ring: &FiniteRing, point: &[Elem]) -> Elem {
        self.terms.iter().fold(ring.zero(), |acc, (c, vars)| {
            let m = vars
                .iter()
                .fold(*c, |m, &(v, e)| ring.mul(m, ring.pow(point[v], e)));
            ring.add(acc, m)
        })
    }
}

/// The points of a scheme with values in a finite ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub vars: Vec<String>,
    pub ring: String,
    /// Coordinate tuples in lexicographic order of element indices.
    pub points: Vec<Vec<Elem>>,
    /// Assignments evaluated by the pruned search.
    pub evaluated: u64,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[Elem]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} points over {}", self.points.len(), self.ring)
    }
}

struct Search<'a> {
    ring: &'a FiniteRing,
    /// Generators to check once variable `i` is assigned.
    checks: Vec<Vec<CompiledPoly>>,
    nvars: usize,
    budget: u64,
    counter: &'a AtomicU64,
}

struct Local {
    pending: u64,
    out: Vec<Vec<Elem>>,
}

impl Search<'_> {
    fn tick(&self, local: &mut Local) -> Result<()> {
        local.pending += 1;
        if local.pending >= FLUSH_EVERY {
            self.flush(local)?;
        }
        Ok(())
    }

    fn flush(&self, local: &mut Local) -> Result<()> {
        let total = self.counter.fetch_add(local.pending, Ordering::Relaxed) + local.pending;
        local.pending = 0;
        if total > self.budget {
            Err(Error::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn descend(&self, depth: usize, point: &mut Vec<Elem>, local: &mut Local) -> Result<()> {
        for v in self.ring.elements() {
            point[depth] = v;
            self.tick(local)?;
            if self.checks[depth].iter().all(|g| g.eval(self.ring, point) == 0) {
                if depth + 1 == self.nvars {
                    local.out.push(point.clone());
                } else {
                    self.descend(depth + 1, point, local)?;
                }
            }
        }
        Ok(())
    }

    /// Every solution whose first coordinate is `first`.
    fn subtree(&self, first: Elem) -> Result<Vec<Vec<Elem>>> {
        let mut local = Local {
            pending: 0,
            out: Vec::new(),
        };
        let mut point = vec![0; self.nvars];
        point[0] = first;
        self.tick(&mut local)?;
        if self.checks[0].iter().all(|g| g.eval(self.ring, &point) == 0) {
            if self.nvars == 1 {
                local.out.push(point.clone());
            } else {
                self.descend(1, &mut point, &mut local)?;
            }
        }
        self.flush(&mut local)?;
        Ok(local.out)
    }
}

/// All points of `x` with coordinates in `pr`, by depth-first search over
/// the coordinates in order; a generator is checked as soon as its last
/// variable is assigned. Every assignment tried counts against `budget`.
pub fn enumerate_points(x: &AffineScheme, pr: &PointRing, budget: u64, strategy: Strategy) -> Result<PointSet> {
    if **x.coef() != **pr.coef() {
        return Err(Error::RingMismatch(format!(
            "scheme over {} evaluated in a {}-algebra",
            x.coef(),
            pr.coef()
        )));
    }
    let ring = pr.ring().as_ref();
    let n = x.nvars();
    let compiled: Vec<CompiledPoly> = x.generators().iter().map(|g| CompiledPoly::new(g, pr)).collect();
    let constant_ok = compiled
        .iter()
        .filter(|g| g.top.is_none())
        .all(|g| g.eval(ring, &[]) == 0);
    let mut set = PointSet {
        vars: x.vars().to_vec(),
        ring: ring.name().to_string(),
        points: Vec::new(),
        evaluated: 1,
    };
    if n == 0 || !constant_ok {
        if constant_ok {
            set.points.push(Vec::new());
        }
        return Ok(set);
    }
    let mut checks = vec![Vec::new(); n];
    for g in compiled {
        if let Some(top) = g.top {
            checks[top].push(g);
        }
    }
    let counter = AtomicU64::new(0);
    let search = Search {
        ring,
        checks,
        nvars: n,
        budget,
        counter: &counter,
    };
    let parts = run_partitions(&search, ring.size(), strategy)?;
    set.points = parts.into_iter().flatten().collect();
    set.evaluated = counter.load(Ordering::Relaxed);
    if set.evaluated > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    Ok(set)
}

type Partition = Vec<Vec<Elem>>;

#[cfg(feature = "parallel")]
fn run_partitions(search: &Search<'_>, size: u32, strategy: Strategy) -> Result<Vec<Partition>> {
    use rayon::prelude::*;
    match strategy {
        Strategy::Parallel => (0..size).into_par_iter().map(|v| search.subtree(v)).collect(),
        Strategy::Sequential => (0..size).map(|v| search.subtree(v)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_partitions(search: &Search<'_>, size: u32, _strategy: Strategy) -> Result<Vec<Partition>> {
    (0..size).map(|v| search.subtree(v)).collect()
}

/// Evaluates every generator of `x` at `point`.
pub fn evaluate_generators(x: &AffineScheme, pr: &PointRing, point: &[Elem]) -> Vec<Elem> {
    x.generators()
        .iter()
        .map(|g| CompiledPoly::new(g, pr).eval(pr.ring(), point))
        .collect()
}

/// Evaluates one polynomial at `point`.
pub fn evaluate(p: &Poly, pr: &PointRing, point: &[Elem]) -> Elem {
    CompiledPoly::new(p, pr).eval(pr.ring(), point)
}
