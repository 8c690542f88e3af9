use std::collections::HashSet;
use std::sync::Arc;

use super::monomial;
use super::polynomial::{Poly, PolyRing};
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: u32 = 40;

/// A reduced Gröbner basis: monic, auto-reduced, sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    basis: Vec<Poly>,
}

/// An ideal given by generators, all in one ring.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Poly>) -> Result<Self> {
        check_rings(ring, &generators)?;
        Ok(Ideal {
            ring: ring.clone(),
            generators,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn groebner(&self, cap: u32) -> Result<GroebnerBasis> {
        groebner(&self.ring, &self.generators, cap)
    }

    pub fn is_unit(&self, cap: u32) -> Result<bool> {
        Ok(self.groebner(cap)?.is_unit())
    }
}

fn check_rings(ring: &Arc<PolyRing>, gens: &[Poly]) -> Result<()> {
    for g in gens {
        if !(Arc::ptr_eq(g.ring(), ring) || **g.ring() == **ring) {
            return Err(Error::RingMismatch(format!(
                "generator {g} is not in the ring over {:?}",
                ring.vars()
            )));
        }
    }
    Ok(())
}

/// Fully reduces `p` by a list of monic polynomials.
fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    while let Some((lead, c)) = rest.leading().map(|(e, c)| (e.clone(), c.clone())) {
        match basis
            .iter()
            .find(|g| monomial::divides(g.leading_exponents().unwrap(), &lead))
        {
            Some(g) => {
                let shift = monomial::div(&lead, g.leading_exponents().unwrap());
                rest = rest.sub_mul_term(g, &shift, &c);
            }
            None => remainder.push(rest.pop_leading().unwrap()),
        }
    }
    remainder.reverse();
    Poly::from_sorted_terms(p.ring(), remainder)
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (ef, eg) = (f.leading_exponents().unwrap(), g.leading_exponents().unwrap());
    let l = monomial::lcm(ef, eg);
    let one = f.ring().coef().one();
    let a = f.mul_term(&monomial::div(&l, ef), &one);
    a.sub_mul_term(g, &monomial::div(&l, eg), &one)
}

/// Buchberger's algorithm with the product and chain criteria and the normal
/// selection strategy. Fails with `DegreeBudgetExceeded` if an S-polynomial of
/// degree above `cap` would be formed.
pub fn groebner(ring: &Arc<PolyRing>, gens: &[Poly], cap: u32) -> Result<GroebnerBasis> {
    check_rings(ring, gens)?;
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic()?);
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(GroebnerBasis::unit(ring));
    }
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.push((i, j));
        }
    }
    let mut live: HashSet<(usize, usize)> = pending.iter().copied().collect();
    while !pending.is_empty() {
        let lcm_of = |&(i, j): &(usize, usize), b: &[Poly]| {
            monomial::lcm(
                b[i].leading_exponents().unwrap(),
                b[j].leading_exponents().unwrap(),
            )
        };
        let best = (0..pending.len())
            .min_by(|&a, &b| {
                ring.cmp(&lcm_of(&pending[a], &basis), &lcm_of(&pending[b], &basis))
                    .then_with(|| (pending[a].1, pending[a].0).cmp(&(pending[b].1, pending[b].0)))
            })
            .unwrap();
        let (i, j) = pending.swap_remove(best);
        live.remove(&(i, j));
        let (li, lj) = (
            basis[i].leading_exponents().unwrap(),
            basis[j].leading_exponents().unwrap(),
        );
        if monomial::coprime(li, lj) {
            continue;
        }
        let l = monomial::lcm(li, lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && monomial::divides(basis[k].leading_exponents().unwrap(), &l)
                && !live.contains(&(i.min(k), i.max(k)))
                && !live.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let deg = monomial::degree(&l);
        if deg > cap {
            return Err(Error::DegreeBudgetExceeded { degree: deg, cap });
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis::unit(ring));
        }
        let n = basis.len();
        basis.push(r.monic()?);
        for k in 0..n {
            pending.push((k, n));
            live.insert((k, n));
        }
    }
    Ok(GroebnerBasis::from_basis(ring, basis))
}

pub fn is_unit_ideal(ring: &Arc<PolyRing>, gens: &[Poly], cap: u32) -> Result<bool> {
    Ok(groebner(ring, gens, cap)?.is_unit())
}

impl GroebnerBasis {
    fn unit(ring: &Arc<PolyRing>) -> Self {
        GroebnerBasis {
            ring: ring.clone(),
            basis: vec![Poly::one(ring)],
        }
    }

    /// Minimalizes and inter-reduces a (monic) Gröbner basis.
    fn from_basis(ring: &Arc<PolyRing>, mut basis: Vec<Poly>) -> Self {
        basis.sort_by(|a, b| {
            ring.cmp(a.leading_exponents().unwrap(), b.leading_exponents().unwrap())
        });
        let mut minimal: Vec<Poly> = Vec::new();
        for g in basis {
            let lg = g.leading_exponents().unwrap();
            if !minimal
                .iter()
                .any(|h| monomial::divides(h.leading_exponents().unwrap(), lg))
            {
                minimal.push(g);
            }
        }
        let reduced = (0..minimal.len())
            .map(|i| {
                let others: Vec<Poly> = minimal
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                reduce(&minimal[i], &others)
            })
            .collect();
        GroebnerBasis {
            ring: ring.clone(),
            basis: reduced,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        assert!(
            Arc::ptr_eq(p.ring(), &self.ring) || **p.ring() == *self.ring,
            "normal form of a polynomial from another ring"
        );
        reduce(p, &self.basis)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Krull dimension of the quotient ring: the largest set of variables
    /// containing the support of no leading monomial; `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let n = self.ring.nvars();
        assert!(n <= 64, "too many variables for dimension search");
        let leads: Vec<u64> = self
            .basis
            .iter()
            .map(|g| {
                g.leading_exponents()
                    .unwrap()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect();
        let mut best = 0;
        independent_search(&leads, n, 0, 0, 0, &mut best);
        best as i64
    }
}

fn independent_search(leads: &[u64], n: usize, next: usize, set: u64, size: usize, best: &mut usize) {
    if size > *best {
        *best = size;
    }
    if size + (n - next) <= *best {
        return;
    }
    for v in next..n {
        let s = set | (1 << v);
        if leads.iter().all(|&m| m & !s != 0) {
            independent_search(leads, n, v + 1, s, size + 1, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseField, EtaleAlgebra};
    use crate::poly::parse_poly;

    fn ring(k: BaseField, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            Arc::new(EtaleAlgebra::trivial(k)),
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn gb(r: &Arc<PolyRing>, gens: &[&str]) -> GroebnerBasis {
        let gens: Vec<Poly> = gens.iter().map(|g| parse_poly(r, g).unwrap()).collect();
        groebner(r, &gens, DEFAULT_DEGREE_CAP).unwrap()
    }

    fn strings(g: &GroebnerBasis) -> Vec<String> {
        g.basis().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn small_bases() {
        let q = ring(BaseField::Rationals, &["x", "y"]);
        assert_eq!(strings(&gb(&q, &["x^2 - 1", "x - 1"])), ["x - 1"]);
        assert_eq!(strings(&gb(&q, &["x^2 + y^2 - 1", "x - y"])), ["x - y", "y^2 - 1/2"]);
        let f2 = ring(BaseField::prime(2).unwrap(), &["x", "y"]);
        assert_eq!(strings(&gb(&f2, &["x*y - 1"])), ["x*y + 1"]);
    }

    #[test]
    fn normal_forms() {
        let f2 = ring(BaseField::prime(2).unwrap(), &["x", "y"]);
        let g = gb(&f2, &["x*y + 1"]);
        assert_eq!(g.normal_form(&parse_poly(&f2, "x^2*y").unwrap()).to_string(), "x");
        let q = ring(BaseField::Rationals, &["x"]);
        let g = gb(&q, &["x - 1"]);
        assert_eq!(g.normal_form(&parse_poly(&q, "x^2").unwrap()).to_string(), "1");
    }

    #[test]
    fn unit_ideals() {
        let q = ring(BaseField::Rationals, &["x", "y"]);
        assert!(gb(&q, &["x", "x + 1"]).is_unit());
        assert!(!gb(&q, &["x"]).is_unit());
        assert!(gb(&q, &["2*y^2 - 1", "y"]).is_unit());
    }

    #[test]
    fn dimensions() {
        let f2 = ring(BaseField::prime(2).unwrap(), &["x", "y"]);
        assert_eq!(gb(&f2, &["x*y + 1"]).krull_dimension(), 1);
        assert_eq!(gb(&f2, &[]).krull_dimension(), 2);
        assert_eq!(gb(&f2, &["1"]).krull_dimension(), -1);
        assert_eq!(gb(&f2, &["x", "y"]).krull_dimension(), 0);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let q = ring(BaseField::Rationals, &["x", "y"]);
        let gens = [parse_poly(&q, "x^3 - y").unwrap(), parse_poly(&q, "x*y^2 - 1").unwrap()];
        assert!(matches!(
            groebner(&q, &gens, 2),
            Err(Error::DegreeBudgetExceeded { cap: 2, .. })
        ));
    }
}
