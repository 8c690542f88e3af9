use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{self, Exponents, MonomialOrder};
use crate::algebra::{AlgElem, EtaleAlgebra, Scalar};
use crate::error::{Error, Result};

/// A polynomial ring `C[x_1, ..., x_n]` over an étale algebra `C` (possibly the
/// base field itself) with a fixed variable order and monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    coef: Arc<EtaleAlgebra>,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(coef: Arc<EtaleAlgebra>, vars: Vec<String>) -> Arc<Self> {
        Self::with_order(coef, vars, MonomialOrder::GrevLex)
    }

    pub fn with_order(coef: Arc<EtaleAlgebra>, vars: Vec<String>, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { coef, vars, order })
    }

    pub fn coef(&self) -> &Arc<EtaleAlgebra> {
        &self.coef
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Same variables over a different coefficient algebra.
    pub fn over(&self, coef: Arc<EtaleAlgebra>) -> Arc<Self> {
        Self::with_order(coef, self.vars.clone(), self.order)
    }

    pub fn reordered(&self, order: MonomialOrder) -> Arc<Self> {
        Self::with_order(self.coef.clone(), self.vars.clone(), order)
    }
}

/// A polynomial with terms kept in ascending monomial order (leading term last)
/// and no zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Exponents, AlgElem)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: AlgElem) -> Self {
        Self::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.coef.one())
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.coef.from_i64(n))
    }

    pub fn scalar(ring: &Arc<PolyRing>, c: Scalar) -> Self {
        Self::constant(ring, ring.coef.from_base(c))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Self::monomial(ring, e, ring.coef.one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, exp: Exponents, c: AlgElem) -> Self {
        assert_eq!(exp.len(), ring.nvars(), "exponent length");
        let terms = if ring.coef.is_zero(&c) {
            Vec::new()
        } else {
            vec![(exp, c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Exponents, AlgElem)>) -> Self {
        let l = &ring.coef;
        let mut acc: BTreeMap<Exponents, AlgElem> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars(), "exponent length");
            match acc.get_mut(&e) {
                Some(v) => *v = l.add(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !l.is_zero(c)).collect();
        terms.sort_by(|a, b| ring.cmp(&a.0, &b.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exponents, AlgElem)] {
        &self.terms
    }

    /// Terms from the leading one downwards.
    pub fn terms_desc(&self) -> impl Iterator<Item = &(Exponents, AlgElem)> {
        self.terms.iter().rev()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Exponents, &AlgElem)> {
        self.terms.last().map(|(e, c)| (e, c))
    }

    pub fn leading_exponents(&self) -> Option<&Exponents> {
        self.terms.last().map(|(e, _)| e)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| monomial::degree(e)).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<AlgElem> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .first()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| self.ring.coef.zero()),
        )
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| self.ring.coef.is_one(&c))
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0))
            .collect()
    }

    fn same_ring(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.vars, other.ring.vars
            )))
        }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let l = &self.ring.coef;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => self.ring.cmp(&x.0, &y.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate_other { l.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        l.sub(&a[i].1, &b[j].1)
                    } else {
                        l.add(&a[i].1, &b[j].1)
                    };
                    if !l.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let l = &self.ring.coef;
        let mut acc: BTreeMap<Exponents, AlgElem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = monomial::mul(ea, eb);
                let c = l.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = l.add(v, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !l.is_zero(c)).collect();
        terms.sort_by(|a, b| self.ring.cmp(&a.0, &b.0));
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &AlgElem) -> Poly {
        let l = &self.ring.coef;
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), l.mul(c, x)))
                .filter(|(_, x)| !l.is_zero(x))
                .collect(),
        }
    }

    /// `c * x^shift * self`; order is preserved by multiplication with a monomial.
    pub fn mul_term(&self, shift: &[u32], c: &AlgElem) -> Poly {
        let l = &self.ring.coef;
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (monomial::mul(e, shift), l.mul(c, x)))
                .filter(|(_, x)| !l.is_zero(x))
                .collect(),
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Exponents, AlgElem)> {
        self.terms.pop()
    }

    /// Terms must already be in ascending order with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Exponents, AlgElem)>) -> Self {
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// `self - c * x^shift * g`.
    pub(crate) fn sub_mul_term(&self, g: &Poly, shift: &[u32], c: &AlgElem) -> Poly {
        self.merge(&g.mul_term(shift, c), true)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Leading coefficient made one; fails when it is not a unit of the
    /// coefficient algebra.
    pub fn monic(&self) -> Result<Poly> {
        match self.leading() {
            None => Ok(self.clone()),
            Some((_, c)) => {
                let inv = self.ring.coef.inv(c)?;
                Ok(self.scale(&inv))
            }
        }
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let l = &self.ring.coef;
        let k = l.base();
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[var] -= 1;
            (e2, l.scale(&k.from_i64(e[var] as i64), c))
        });
        Poly::from_terms(&self.ring, terms)
    }

    /// Maps every coefficient into `target` (same variable count); the map must be additive.
    pub fn map_coefficients(&self, target: &Arc<PolyRing>, f: impl Fn(&AlgElem) -> AlgElem) -> Poly {
        assert_eq!(target.nvars(), self.ring.nvars(), "variable count");
        Poly::from_terms(target, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Re-reads the polynomial in a ring with the same coefficients and
    /// variables but a different monomial order.
    pub fn in_ring(&self, target: &Arc<PolyRing>) -> Poly {
        assert_eq!(target.nvars(), self.ring.nvars(), "variable count");
        assert_eq!(target.coef, self.ring.coef, "coefficient algebra");
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| target.cmp(&a.0, &b.0));
        Poly {
            ring: target.clone(),
            terms,
        }
    }

    /// Embeds the polynomial into a ring with more variables; variable `i`
    /// goes to `positions[i]`.
    pub fn relabel(&self, target: &Arc<PolyRing>, positions: &[usize]) -> Poly {
        let coef = embed_coefficient_fn(&self.ring.coef, &target.coef)
            .expect("compatible coefficient algebras");
        Poly::from_terms(
            target,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; target.nvars()];
                for (i, &x) in e.iter().enumerate() {
                    ne[positions[i]] += x;
                }
                (ne, coef(c))
            }),
        )
    }

    /// Ring homomorphism sending variable `i` to `images[i]`; coefficients are
    /// carried over (base field coefficients embed into an extension).
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.ring.nvars(),
                found: images.len(),
            });
        }
        let Some(target) = images.first().map(|p| p.ring.clone()) else {
            // no variables: only a constant
            return Err(Error::Invalid(
                "substitution into a ring without variables needs a target ring".into(),
            ));
        };
        self.substitute_into(&target, images)
    }

    pub fn substitute_into(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.ring.nvars(),
                found: images.len(),
            });
        }
        for im in images {
            if !(Arc::ptr_eq(&im.ring, target) || *im.ring == **target) {
                return Err(Error::RingMismatch("substitution images live in different rings".into()));
            }
        }
        let coef = embed_coefficient_fn(&self.ring.coef, &target.coef)?;
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; images.len()];
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, coef(c));
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                while powers[i].len() <= x as usize {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul_unchecked(&powers[i][x as usize]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.merge(&term, false);
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        self.to_string()
    }
}

pub type CoefficientMap = Box<dyn Fn(&AlgElem) -> AlgElem + Send + Sync>;

/// Coefficient embedding between algebras: identity, or base field into an
/// extension with the same base.
pub fn embed_coefficient_fn(
    from: &Arc<EtaleAlgebra>,
    to: &Arc<EtaleAlgebra>,
) -> Result<CoefficientMap> {
    if from == to {
        return Ok(Box::new(|c: &AlgElem| c.clone()));
    }
    if from.is_trivial() && from.base() == to.base() {
        let to = to.clone();
        return Ok(Box::new(move |c: &AlgElem| to.from_base(c.0[0].clone())));
    }
    Err(Error::RingMismatch(format!(
        "cannot embed coefficients of {from} into {to}"
    )))
}

fn fmt_coefficient(l: &EtaleAlgebra, c: &AlgElem) -> (bool, String, bool) {
    // (negative, text without sign, is unit one)
    let k = l.base();
    let nonzero: Vec<usize> = (0..c.0.len()).filter(|&i| !k.is_zero(&c.0[i])).collect();
    if nonzero == [0] {
        let s = &c.0[0];
        let neg = k.is_negative(s);
        let abs = if neg { k.neg(s) } else { s.clone() };
        return (neg, k.display(&abs), k.is_one(&abs));
    }
    (false, format!("({})", l.display(c)), false)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let l = &self.ring.coef;
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (neg, coeff, unit) = fmt_coefficient(l, c);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.ring.vars[i].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[i], x)
                    }
                })
                .collect();
            let body = match (mono.is_empty(), unit) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", coeff, mono.join("*")),
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomials from the same ring")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomials from the same ring")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomials from the same ring")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let l = &self.ring.coef;
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), l.neg(c))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BaseField;
    use crate::poly::parse_poly;

    fn ring(k: BaseField, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            Arc::new(EtaleAlgebra::trivial(k)),
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(BaseField::Rationals, &["x", "y"]);
        let p = parse_poly(&r, "x + y").unwrap();
        let q = parse_poly(&r, "x - y").unwrap();
        assert_eq!(&p * &q, parse_poly(&r, "x^2 - y^2").unwrap());
        assert_eq!((&p * &q).to_string(), "x^2 - y^2");
        assert_eq!(&p + &Poly::zero(&r), p);
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let r1 = ring(BaseField::Rationals, &["x"]);
        let r2 = ring(BaseField::Rationals, &["y"]);
        let a = Poly::var(&r1, 0);
        let b = Poly::var(&r2, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn derivative_in_characteristic_two() {
        let r = ring(BaseField::prime(2).unwrap(), &["x"]);
        let p = parse_poly(&r, "x^2").unwrap();
        assert!(p.derivative(0).is_zero());
    }
}
