//! Automorphism groups of Galois extensions `L = k[t]/(f)` and the splitting
//! of `L ⊗_k L` into a product of copies of `L`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::etale::{AlgElem, EtaleAlgebra};
use super::field::{BaseField, Scalar};
use super::upoly::{self, UPoly};
use crate::error::{Error, Result};
use crate::poly::{groebner, MonomialOrder, Poly, PolyRing, DEFAULT_DEGREE_CAP};

pub const DEFAULT_HEIGHT_BOUND: u64 = 1_000_000;

/// The automorphisms of `L/k`, each recorded by the image of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGroup {
    algebra: Arc<EtaleAlgebra>,
    images: Vec<AlgElem>,
    identity: usize,
}

impl GaloisGroup {
    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.algebra
    }

    /// `σ(t)` for every automorphism `σ`.
    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// `σ(a) = Σ a_j σ(t)^j`.
    pub fn apply(&self, sigma: usize, a: &AlgElem) -> AlgElem {
        apply_image(&self.algebra, &self.images[sigma], a)
    }

    /// Index of `σ_i ∘ σ_j`.
    pub fn compose(&self, i: usize, j: usize) -> Option<usize> {
        let image = self.apply(i, &self.images[j]);
        self.images.iter().position(|r| *r == image)
    }

    pub fn inverse(&self, i: usize) -> Option<usize> {
        (0..self.order()).find(|&j| self.compose(i, j) == Some(self.identity))
    }

    /// Closure under composition and existence of inverses.
    pub fn check_axioms(&self) -> bool {
        (0..self.order()).all(|i| {
            (0..self.order()).all(|j| self.compose(i, j).is_some()) && self.inverse(i).is_some()
        })
    }
}

fn apply_image(l: &EtaleAlgebra, image: &AlgElem, a: &AlgElem) -> AlgElem {
    let mut acc = l.zero();
    let mut power = l.one();
    for c in &a.0 {
        acc = l.add(&acc, &l.scale(c, &power));
        power = l.mul(&power, image);
    }
    acc
}

/// The Galois group of `L/k`. Over a finite field every element of `L` is
/// tried as a root of `f`; over the rationals the roots are found by solving
/// `f(c_0 + c_1 t + ...) = 0` exactly, searching rational coordinates of
/// height at most `height_bound`.
pub fn galois_group(l: &Arc<EtaleAlgebra>, height_bound: u64) -> Result<GaloisGroup> {
    let d = l.degree();
    let k = l.base();
    let f = l.modulus().clone();
    let roots: Vec<AlgElem> = if d == 1 {
        vec![l.generator()]
    } else if k.is_finite() {
        if !upoly::is_irreducible(&k, &f) {
            return Err(Error::Invalid(format!(
                "{l} is not a field; its modulus is reducible"
            )));
        }
        l.elements()
            .expect("finite base")
            .into_iter()
            .filter(|r| l.is_zero(&l.eval_upoly(&f, r)))
            .collect()
    } else {
        rational_roots_in(l, height_bound)?
    };
    if roots.len() != d {
        return Err(Error::NotGalois {
            found: roots.len(),
            degree: d,
        });
    }
    let identity = roots
        .iter()
        .position(|r| *r == l.generator())
        .expect("t is a root of its own modulus");
    let group = GaloisGroup {
        algebra: l.clone(),
        images: roots,
        identity,
    };
    if !group.check_axioms() {
        return Err(Error::NotGalois { found: d, degree: d });
    }
    Ok(group)
}

/// Roots of `f` in `L` for `k = Q`, via a lexicographic Gröbner basis of the
/// coordinate system and rational root search on its triangular form.
fn rational_roots_in(l: &Arc<EtaleAlgebra>, height_bound: u64) -> Result<Vec<AlgElem>> {
    let d = l.degree();
    let k = l.base();
    let ring = PolyRing::with_order(
        Arc::new(EtaleAlgebra::trivial(k)),
        (0..d).map(|j| format!("c{j}")).collect(),
        MonomialOrder::Lex,
    );
    // f(Σ c_j t^j) expanded over L, one equation per coordinate
    let lring = ring.over(l.clone());
    let r = (0..d).fold(Poly::zero(&lring), |acc, j| {
        &acc + &Poly::var(&lring, j).scale(&l.basis_element(j))
    });
    let mut value = Poly::zero(&lring);
    for c in l.modulus().iter().rev() {
        value = &(&value * &r) + &Poly::scalar(&lring, c.clone());
    }
    let equations: Vec<Poly> = (0..d)
        .map(|j| {
            Poly::from_terms(
                &ring,
                value
                    .terms()
                    .iter()
                    .map(|(e, c)| (e.clone(), AlgElem(vec![c.0[j].clone()]))),
            )
        })
        .collect();
    let gb = groebner(&ring, &equations, DEFAULT_DEGREE_CAP)?;
    let mut exhausted = false;
    let mut solutions = Vec::new();
    let mut partial = vec![None; d];
    back_substitute(&ring, gb.basis(), d, &mut partial, height_bound, &mut exhausted, &mut solutions);
    let roots: Vec<AlgElem> = solutions
        .into_iter()
        .map(AlgElem)
        .filter(|r| l.is_zero(&l.eval_upoly(l.modulus(), r)))
        .collect();
    if roots.len() < d && exhausted {
        return Err(Error::SearchExhausted { bound: height_bound });
    }
    Ok(roots)
}

fn back_substitute(
    ring: &Arc<PolyRing>,
    basis: &[Poly],
    level: usize,
    partial: &mut Vec<Option<Scalar>>,
    bound: u64,
    exhausted: &mut bool,
    out: &mut Vec<Vec<Scalar>>,
) {
    if level == 0 {
        out.push(partial.iter().map(|c| c.clone().unwrap()).collect());
        return;
    }
    let var = level - 1;
    let images: Vec<Poly> = partial
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Some(c) => Poly::scalar(ring, c.clone()),
            None => Poly::var(ring, i),
        })
        .collect();
    let k = ring.coef().base();
    let mut univariate: Option<UPoly> = None;
    for g in basis {
        let h = g.substitute(&images).expect("same ring");
        if h.is_zero() || h.support().iter().any(|&v| v != var) {
            continue;
        }
        let mut u = vec![k.zero(); h.total_degree().unwrap_or(0) as usize + 1];
        for (e, c) in h.terms() {
            u[e[var] as usize] = c.0[0].clone();
        }
        let u = upoly::trim(&k, u);
        univariate = Some(match univariate {
            None => u,
            Some(prev) => upoly::gcd(&k, &prev, &u),
        });
    }
    let Some(u) = univariate else {
        // positive-dimensional fibre: cannot happen for a separable modulus
        *exhausted = true;
        return;
    };
    let (roots, truncated) = rational_roots(&u, bound);
    *exhausted |= truncated;
    for r in roots {
        partial[var] = Some(Scalar::Rat(r));
        back_substitute(ring, basis, level - 1, partial, bound, exhausted, out);
        partial[var] = None;
    }
}

fn positive_divisors(n: &BigInt, bound: u64) -> (Vec<BigInt>, bool) {
    let n = n.abs();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut i = BigInt::one();
    let bound_big = BigInt::from(bound);
    while &i * &i <= n {
        if i > bound_big {
            truncated = true;
            break;
        }
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let co = &n / &i;
            if co != i {
                if co <= bound_big {
                    out.push(co);
                } else {
                    truncated = true;
                }
            }
        }
        i += 1;
    }
    out.sort();
    (out, truncated)
}

/// Rational roots of a polynomial over `Q` whose numerators and denominators
/// stay within `bound`; the flag reports that larger candidates were skipped.
pub fn rational_roots(u: &UPoly, bound: u64) -> (Vec<BigRational>, bool) {
    let k = BaseField::Rationals;
    let q = |s: &Scalar| match s {
        Scalar::Rat(r) => r.clone(),
        Scalar::Mod(_) => panic!("rational polynomial expected"),
    };
    let mut coeffs: Vec<BigRational> = u.iter().map(q).collect();
    let mut roots = Vec::new();
    if coeffs.is_empty() {
        return (roots, false);
    }
    let lead_zero = coeffs.iter().take_while(|c| c.is_zero()).count();
    if lead_zero > 0 {
        roots.push(BigRational::zero());
        coeffs.drain(..lead_zero);
    }
    if coeffs.len() <= 1 {
        return (roots, false);
    }
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &den).to_integer()).collect();
    let (ps, t1) = positive_divisors(&ints[0], bound);
    let (qs, t2) = positive_divisors(ints.last().unwrap(), bound);
    let poly: UPoly = coeffs.iter().cloned().map(Scalar::Rat).collect();
    let mut found: Vec<BigRational> = Vec::new();
    for p in &ps {
        for qd in &qs {
            for sign in [1, -1] {
                let cand = BigRational::new(p * sign, qd.clone());
                if !found.contains(&cand) && k.is_zero(&upoly::eval(&k, &poly, &Scalar::Rat(cand.clone()))) {
                    found.push(cand);
                }
            }
        }
    }
    found.sort();
    roots.extend(found);
    roots.sort();
    (roots, t1 || t2)
}

/// `L ⊗_k L` with elements stored as `d × d` coordinate arrays:
/// entry `[a][b]` is the coefficient of `t^a ⊗ t^b`.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    algebra: Arc<EtaleAlgebra>,
}

pub type TensorElem = Vec<Vec<Scalar>>;

impl TensorSquare {
    pub fn new(algebra: Arc<EtaleAlgebra>) -> Self {
        TensorSquare { algebra }
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.algebra
    }

    pub fn zero(&self) -> TensorElem {
        let d = self.algebra.degree();
        vec![vec![self.algebra.base().zero(); d]; d]
    }

    /// `a ⊗ b`.
    pub fn pure(&self, a: &AlgElem, b: &AlgElem) -> TensorElem {
        let k = self.algebra.base();
        a.0.iter()
            .map(|x| b.0.iter().map(|y| k.mul(x, y)).collect())
            .collect()
    }

    pub fn one(&self) -> TensorElem {
        self.pure(&self.algebra.one(), &self.algebra.one())
    }

    pub fn add(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        let k = self.algebra.base();
        x.iter()
            .zip(y)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| k.add(a, b)).collect())
            .collect()
    }

    pub fn sub(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        let k = self.algebra.base();
        x.iter()
            .zip(y)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| k.sub(a, b)).collect())
            .collect()
    }

    pub fn mul(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        let l = &self.algebra;
        let k = l.base();
        let d = l.degree();
        let mut acc = self.zero();
        for a in 0..d {
            for b in 0..d {
                if k.is_zero(&x[a][b]) {
                    continue;
                }
                for c in 0..d {
                    for e in 0..d {
                        if k.is_zero(&y[c][e]) {
                            continue;
                        }
                        let coef = k.mul(&x[a][b], &y[c][e]);
                        let left = l.mul(&l.basis_element(a), &l.basis_element(c));
                        let right = l.mul(&l.basis_element(b), &l.basis_element(e));
                        let term = self.pure(&l.scale(&coef, &left), &right);
                        acc = self.add(&acc, &term);
                    }
                }
            }
        }
        acc
    }

    pub fn is_zero(&self, x: &TensorElem) -> bool {
        let k = self.algebra.base();
        x.iter().flatten().all(|c| k.is_zero(c))
    }

    /// The factor map `a ⊗ l ↦ a · σ(l)` onto the copy of `L` indexed by `σ`.
    pub fn project(&self, group: &GaloisGroup, sigma: usize, x: &TensorElem) -> AlgElem {
        let l = &self.algebra;
        let mut acc = l.zero();
        for (a, row) in x.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                let term = l.mul(
                    &l.basis_element(a),
                    &group.apply(sigma, &l.basis_element(b)),
                );
                acc = l.add(&acc, &l.scale(c, &term));
            }
        }
        acc
    }

    /// `(1 ⊗ a − σ(a) ⊗ 1) · e` is zero for every basis element `a`.
    pub fn fixes_twisted_diagonal(&self, group: &GaloisGroup, sigma: usize, e: &TensorElem) -> bool {
        let l = &self.algebra;
        (0..l.degree()).all(|j| {
            let a = l.basis_element(j);
            let rel = self.sub(&self.pure(&l.one(), &a), &self.pure(&group.apply(sigma, &a), &l.one()));
            self.is_zero(&self.mul(&rel, e))
        })
    }
}

/// The orthogonal idempotents `e_σ` of `L ⊗_k L`, one per automorphism, with
/// `e_σ = (c_σ^{-1} ⊗ 1) ∏_{ρ≠σ} (1 ⊗ t − ρ(t) ⊗ 1)` and
/// `c_σ = ∏_{ρ≠σ} (σ(t) − ρ(t))`.
pub fn tensor_split(group: &GaloisGroup) -> Result<Vec<TensorElem>> {
    let l = group.algebra();
    let ts = TensorSquare::new(l.clone());
    let t = l.generator();
    let mut out = Vec::with_capacity(group.order());
    for (s, sigma_t) in group.images().iter().enumerate() {
        let mut e = ts.one();
        let mut c = l.one();
        for (r, rho_t) in group.images().iter().enumerate() {
            if r == s {
                continue;
            }
            let factor = ts.sub(&ts.pure(&l.one(), &t), &ts.pure(rho_t, &l.one()));
            e = ts.mul(&e, &factor);
            c = l.mul(&c, &l.sub(sigma_t, rho_t));
        }
        let c_inv = l.inv(&c)?;
        e = ts.mul(&ts.pure(&c_inv, &l.one()), &e);
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(k: BaseField, f: &[i64]) -> Arc<EtaleAlgebra> {
        Arc::new(EtaleAlgebra::new(k, f.iter().map(|&c| k.from_i64(c)).collect()).unwrap())
    }

    #[test]
    fn frobenius_of_f4() {
        let l = alg(BaseField::prime(2).unwrap(), &[1, 1, 1]);
        let g = galois_group(&l, DEFAULT_HEIGHT_BOUND).unwrap();
        let shown: Vec<String> = g.images().iter().map(|r| l.display(r)).collect();
        assert_eq!(shown, ["t", "t + 1"]);
        assert_eq!(g.compose(1, 1), Some(g.identity()));
    }

    #[test]
    fn conjugation_of_gaussian_rationals() {
        let l = alg(BaseField::Rationals, &[1, 0, 1]);
        let g = galois_group(&l, DEFAULT_HEIGHT_BOUND).unwrap();
        let mut shown: Vec<String> = g.images().iter().map(|r| l.display(r)).collect();
        shown.sort();
        assert_eq!(shown, ["-t", "t"]);
    }

    #[test]
    fn cube_root_of_two_is_not_galois() {
        let l = alg(BaseField::Rationals, &[-2, 0, 0, 1]);
        assert_eq!(
            galois_group(&l, DEFAULT_HEIGHT_BOUND),
            Err(Error::NotGalois { found: 1, degree: 3 })
        );
    }

    #[test]
    fn rational_root_search_reports_exhaustion() {
        let k = BaseField::Rationals;
        // 1000003 * x - 1 has the root 1/1000003, beyond a bound of 1000
        let u: UPoly = vec![k.from_i64(-1), k.from_i64(1_000_003)];
        let (roots, truncated) = rational_roots(&u, 1000);
        assert!(roots.is_empty());
        assert!(truncated);
        let (roots, truncated) = rational_roots(&u, DEFAULT_HEIGHT_BOUND * 2);
        assert_eq!(roots, vec![BigRational::new(1.into(), 1_000_003.into())]);
        assert!(!truncated);
    }

    #[test]
    fn gaussian_split_matches_closed_form() {
        let l = alg(BaseField::Rationals, &[1, 0, 1]);
        let g = galois_group(&l, DEFAULT_HEIGHT_BOUND).unwrap();
        let es = tensor_split(&g).unwrap();
        let ts = TensorSquare::new(l.clone());
        let k = l.base();
        let half = k.inv(&k.from_i64(2)).unwrap();
        let t = l.generator();
        // (1 ⊗ 1 − t ⊗ t) / 2
        let expected = ts.sub(&ts.pure(&l.one(), &l.one()), &ts.pure(&t, &t));
        let expected: TensorElem = expected
            .iter()
            .map(|r| r.iter().map(|c| k.mul(c, &half)).collect())
            .collect();
        assert_eq!(es[g.identity()], expected);
    }

    #[test]
    fn trivial_extension_splits_into_one() {
        let l = Arc::new(EtaleAlgebra::trivial(BaseField::prime(3).unwrap()));
        let g = galois_group(&l, DEFAULT_HEIGHT_BOUND).unwrap();
        let es = tensor_split(&g).unwrap();
        assert_eq!(es, vec![TensorSquare::new(l).one()]);
    }
}
