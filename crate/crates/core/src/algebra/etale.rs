use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::field::{BaseField, Scalar};
use super::linalg::{self, Matrix};
use super::upoly::{self, UPoly};
use crate::error::{Error, Result};

/// Coordinates of an element of `k[t]/(f)` in the power basis `1, t, ..., t^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgElem(pub Vec<Scalar>);

impl AlgElem {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }
}

/// A monogenic finite étale algebra `L = k[t]/(f)` with `f` monic and separable.
///
/// The base field itself is the degree-one algebra `k[t]/(t)`, so polynomial
/// rings over `k` and over `L` share one coefficient type.
#[derive(Clone, Debug)]
pub struct EtaleAlgebra {
    base: BaseField,
    modulus: UPoly,
    /// `t^{d+i}` reduced into the power basis, for `i = 0..d-1`.
    reduction: Vec<Vec<Scalar>>,
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for EtaleAlgebra {}

impl Hash for EtaleAlgebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.modulus.hash(state);
    }
}

impl EtaleAlgebra {
    /// Builds `k[t]/(f)`; `modulus` lists the coefficients of `f` from the
    /// constant term up.
    pub fn new(base: BaseField, modulus: UPoly) -> Result<Self> {
        let f = upoly::trim(&base, modulus);
        let d = match upoly::degree(&f) {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Invalid("modulus must have degree >= 1".into())),
        };
        if !base.is_one(&f[d]) {
            return Err(Error::NotMonic {
                leading: base.display(&f[d]),
            });
        }
        let g = upoly::gcd(&base, &f, &upoly::derivative(&base, &f));
        if !upoly::is_one(&base, &g) {
            return Err(Error::NotSeparable {
                modulus: upoly::display(&base, &f, "t"),
                gcd: upoly::display(&base, &g, "t"),
            });
        }
        let mut reduction: Vec<Vec<Scalar>> = Vec::with_capacity(d.saturating_sub(1).max(1));
        let mut cur: Vec<Scalar> = f[..d].iter().map(|c| base.neg(c)).collect();
        for _ in 0..d.max(2) - 1 {
            reduction.push(cur.clone());
            // multiply by t and fold t^d back in
            let top = cur[d - 1].clone();
            let mut next = vec![base.zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] = base.add(&next[i], &base.mul(&top, &reduction[0][i]));
            }
            cur = next;
        }
        Ok(EtaleAlgebra {
            base,
            modulus: f,
            reduction,
        })
    }

    /// The base field viewed as the degree-one algebra `k[t]/(t)`.
    pub fn trivial(base: BaseField) -> Self {
        EtaleAlgebra::new(base, vec![base.zero(), base.one()]).expect("t is separable")
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 1
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem(vec![self.base.zero(); self.degree()])
    }

    pub fn one(&self) -> AlgElem {
        self.from_base(self.base.one())
    }

    pub fn from_base(&self, c: Scalar) -> AlgElem {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = c;
        AlgElem(v)
    }

    pub fn from_i64(&self, n: i64) -> AlgElem {
        self.from_base(self.base.from_i64(n))
    }

    /// Reduces an arbitrary coefficient list modulo `f`.
    pub fn from_coeffs(&self, coeffs: &[Scalar]) -> AlgElem {
        let d = self.degree();
        let mut out = vec![self.base.zero(); d];
        for (i, c) in coeffs.iter().enumerate() {
            if self.base.is_zero(c) {
                continue;
            }
            if i < d {
                out[i] = self.base.add(&out[i], c);
            } else {
                let red = self.power_of_t(i);
                for j in 0..d {
                    out[j] = self.base.add(&out[j], &self.base.mul(c, &red[j]));
                }
            }
        }
        AlgElem(out)
    }

    fn power_of_t(&self, e: usize) -> Vec<Scalar> {
        let d = self.degree();
        if e < d {
            let mut v = vec![self.base.zero(); d];
            v[e] = self.base.one();
            return v;
        }
        if e - d < self.reduction.len() {
            return self.reduction[e - d].clone();
        }
        let half = self.power_of_t(e / 2);
        let rest = self.power_of_t(e - e / 2);
        self.mul(&AlgElem(half), &AlgElem(rest)).0
    }

    /// The class of `t`; for the trivial algebra this is `0`.
    pub fn generator(&self) -> AlgElem {
        self.from_coeffs(&[self.base.zero(), self.base.one()])
    }

    /// `e_j = t^j`.
    pub fn basis_element(&self, j: usize) -> AlgElem {
        AlgElem(self.power_of_t(j))
    }

    pub fn is_zero(&self, a: &AlgElem) -> bool {
        a.0.iter().all(|c| self.base.is_zero(c))
    }

    pub fn is_one(&self, a: &AlgElem) -> bool {
        a == &self.one()
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    pub fn scale(&self, c: &Scalar, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let d = self.degree();
        if d == 1 {
            return AlgElem(vec![self.base.mul(&a.0[0], &b.0[0])]);
        }
        let k = &self.base;
        let mut wide = vec![k.zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                wide[i + j] = k.add(&wide[i + j], &k.mul(x, y));
            }
        }
        let mut out: Vec<Scalar> = wide[..d].to_vec();
        for (e, c) in wide.iter().enumerate().skip(d) {
            if k.is_zero(c) {
                continue;
            }
            for (j, r) in self.reduction[e - d].iter().enumerate() {
                out[j] = k.add(&out[j], &k.mul(c, r));
            }
        }
        AlgElem(out)
    }

    pub fn pow(&self, a: &AlgElem, mut e: u64) -> AlgElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplication-by-`a` matrix: column `j` holds the coordinates of `a t^j`.
    pub fn mult_matrix(&self, a: &AlgElem) -> Matrix {
        let d = self.degree();
        let cols: Vec<AlgElem> = (0..d)
            .map(|j| self.mul(a, &self.basis_element(j)))
            .collect();
        (0..d)
            .map(|i| (0..d).map(|j| cols[j].0[i].clone()).collect())
            .collect()
    }

    /// `(N(a), Tr(a))` as determinant and trace of the multiplication matrix.
    pub fn norm_and_trace(&self, a: &AlgElem) -> (Scalar, Scalar) {
        let m = self.mult_matrix(a);
        (linalg::det(&self.base, &m), linalg::trace(&self.base, &m))
    }

    pub fn norm(&self, a: &AlgElem) -> Scalar {
        self.norm_and_trace(a).0
    }

    pub fn trace(&self, a: &AlgElem) -> Scalar {
        self.norm_and_trace(a).1
    }

    pub fn inv(&self, a: &AlgElem) -> Result<AlgElem> {
        let m = self.mult_matrix(a);
        let one = self.one();
        if let Some(x) = linalg::solve(&self.base, &m, &one.0) {
            let x = AlgElem(x);
            if self.is_one(&self.mul(a, &x)) {
                return Ok(x);
            }
        }
        let k = &self.base;
        let g = upoly::gcd(k, &upoly::trim(k, a.0.clone()), &self.modulus);
        let (cof, _) = upoly::div_rem(k, &self.modulus, &g);
        Err(Error::NotInvertible {
            element: self.display(a),
            gcd: upoly::display(k, &g, "t"),
            cofactor: upoly::display(k, &cof, "t"),
        })
    }

    pub fn div(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn is_unit(&self, a: &AlgElem) -> bool {
        !self.base.is_zero(&self.norm(a))
    }

    /// Evaluates a univariate polynomial with base-field coefficients at `a`.
    pub fn eval_upoly(&self, p: &UPoly, a: &AlgElem) -> AlgElem {
        p.iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, a), &self.from_base(c.clone()))
        })
    }

    /// Every element, for finite base fields, in lexicographic order of the
    /// residue coordinates (constant coordinate fastest).
    pub fn elements(&self) -> Option<Vec<AlgElem>> {
        let elems = self.base.elements()?;
        let d = self.degree();
        let q = elems.len();
        let total = q.checked_pow(d as u32)?;
        Some(
            (0..total)
                .map(|mut idx| {
                    AlgElem(
                        (0..d)
                            .map(|_| {
                                let c = elems[idx % q].clone();
                                idx /= q;
                                c
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn display(&self, a: &AlgElem) -> String {
        upoly::display(&self.base, &upoly::trim(&self.base, a.0.clone()), "t")
    }

    pub fn describe(&self) -> AlgebraSummary {
        AlgebraSummary {
            base: self.base.to_string(),
            degree: self.degree(),
            modulus: upoly::display(&self.base, &self.modulus, "t"),
        }
    }
}

impl fmt::Display for EtaleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[t]/({})",
            self.base,
            upoly::display(&self.base, &self.modulus, "t")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraSummary {
    pub base: String,
    pub degree: usize,
    pub modulus: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> BaseField {
        BaseField::prime(p).unwrap()
    }

    fn alg(k: BaseField, f: &[i64]) -> Result<EtaleAlgebra> {
        EtaleAlgebra::new(k, f.iter().map(|&c| k.from_i64(c)).collect())
    }

    fn el(l: &EtaleAlgebra, c: &[i64]) -> AlgElem {
        l.from_coeffs(&c.iter().map(|&x| l.base().from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn f4_construction_and_products() {
        let f4 = alg(gf(2), &[1, 1, 1]).unwrap();
        assert_eq!(f4.degree(), 2);
        let t = f4.generator();
        assert_eq!(f4.mul(&t, &t), el(&f4, &[1, 1]));
    }

    #[test]
    fn gaussian_rationals() {
        let qi = alg(BaseField::Rationals, &[1, 0, 1]).unwrap();
        let t = qi.generator();
        assert_eq!(qi.inv(&t).unwrap(), qi.neg(&t));
    }

    #[test]
    fn rejects_inseparable_and_non_monic() {
        assert!(matches!(
            alg(gf(2), &[0, 0, 1]),
            Err(Error::NotSeparable { .. })
        ));
        assert!(matches!(
            alg(BaseField::Rationals, &[1, 0, 2]),
            Err(Error::NotMonic { .. })
        ));
    }

    #[test]
    fn zero_is_not_invertible() {
        let f4 = alg(gf(2), &[1, 1, 1]).unwrap();
        assert!(matches!(f4.inv(&f4.zero()), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn zero_divisor_witness_for_split_modulus() {
        // t^2 - 1 = (t - 1)(t + 1) over Q
        let l = alg(BaseField::Rationals, &[-1, 0, 1]).unwrap();
        let a = el(&l, &[-1, 1]);
        match l.inv(&a) {
            Err(Error::NotInvertible { gcd, cofactor, .. }) => {
                assert_eq!(gcd, "t - 1");
                assert_eq!(cofactor, "t + 1");
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn mult_matrices_and_norms() {
        let k2 = gf(2);
        let f4 = alg(k2, &[1, 1, 1]).unwrap();
        let t = f4.generator();
        let m = f4.mult_matrix(&t);
        assert_eq!(
            m,
            vec![
                vec![k2.from_i64(0), k2.from_i64(1)],
                vec![k2.from_i64(1), k2.from_i64(1)]
            ]
        );
        assert_eq!(f4.norm_and_trace(&t), (k2.one(), k2.one()));

        let q = BaseField::Rationals;
        let qi = alg(q, &[1, 0, 1]).unwrap();
        let mt = qi.mult_matrix(&qi.generator());
        assert_eq!(
            mt,
            vec![vec![q.from_i64(0), q.from_i64(-1)], vec![q.from_i64(1), q.from_i64(0)]]
        );
        assert_eq!(qi.norm_and_trace(&qi.generator()), (q.one(), q.zero()));
        assert_eq!(qi.norm_and_trace(&qi.one()), (q.one(), q.from_i64(2)));
        assert_eq!(qi.mult_matrix(&qi.one()), linalg::identity(&q, 2));
    }

    #[test]
    fn reduction_table_matches_remainder_division() {
        let k = gf(3);
        let l = alg(k, &[1, 2, 0, 1]).unwrap(); // t^3 + 2t + 1
        for e in 0..8usize {
            let mut mono = vec![k.zero(); e + 1];
            mono[e] = k.one();
            let (_, r) = upoly::div_rem(&k, &mono, l.modulus());
            let mut r = r;
            r.resize(3, k.zero());
            assert_eq!(l.basis_element(e).0, r, "t^{e}");
        }
    }

    #[test]
    fn unit_count_of_field_extension() {
        let f9 = alg(gf(3), &[1, 0, 1]).unwrap();
        let units = f9
            .elements()
            .unwrap()
            .iter()
            .filter(|a| f9.is_unit(a))
            .count();
        assert_eq!(units, 8);
        // t^2 - 1 over F3 splits: units of F3 x F3
        let split = alg(gf(3), &[2, 0, 1]).unwrap();
        let units = split
            .elements()
            .unwrap()
            .iter()
            .filter(|a| split.is_unit(a))
            .count();
        assert_eq!(units, 4);
    }
}
