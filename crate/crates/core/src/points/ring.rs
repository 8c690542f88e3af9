use std::fmt;

use crate::algebra::{linalg, upoly, BaseField, EtaleAlgebra, Scalar};
use crate::error::{Error, Result};

/// Rings up to this size get precomputed addition, multiplication and unit
/// tables.
const TABLE_LIMIT: u32 = 1024;
/// Largest ring the encoding supports.
const SIZE_LIMIT: u64 = 1 << 24;

/// Element of a [`FiniteRing`]: its coordinate vector read as a base-`p`
/// number, first coordinate least significant.
pub type Elem = u32;

struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    unit: Vec<bool>,
}

/// A finite commutative `F_p`-algebra given by structure constants on a basis
/// `e_0 = 1, e_1, ..., e_{n-1}`.
pub struct FiniteRing {
    name: String,
    p: u64,
    dim: usize,
    size: u32,
    /// `e_i * e_j = Σ_k structure[i][j][k] e_k`.
    structure: Vec<Vec<Vec<u64>>>,
    tables: Option<Tables>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("dim", &self.dim)
            .finish()
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FiniteRing {
    fn from_structure(name: String, p: u64, structure: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let dim = structure.len();
        let size = p
            .checked_pow(dim as u32)
            .filter(|&s| s <= SIZE_LIMIT)
            .ok_or_else(|| Error::Invalid(format!("{name} is too large to enumerate")))?;
        let mut ring = FiniteRing {
            name,
            p,
            dim,
            size: size as u32,
            structure,
            tables: None,
        };
        if ring.size <= TABLE_LIMIT {
            ring.tables = Some(ring.build_tables());
        }
        Ok(ring)
    }

    fn build_tables(&self) -> Tables {
        let n = self.size as usize;
        let mut add = vec![0; n * n];
        for x in 0..self.size {
            for y in 0..self.size {
                add[x as usize * n + y as usize] = self.add_digits(x, y);
            }
        }
        let mut smul = vec![0; self.p as usize * n];
        for c in 1..self.p as usize {
            for x in 0..n {
                smul[c * n + x] = add[smul[(c - 1) * n + x] as usize * n + x];
            }
        }
        // x = rest + c·p^k with k the top nonzero digit, so x·y is
        // rest·y + c·(e_k·y) and rest < x is already filled in.
        let mut mul = vec![0; n * n];
        for y in 0..self.size {
            let by: Vec<Elem> = (0..self.dim)
                .map(|k| self.mul_coords(self.basis_index(k), y))
                .collect();
            let mut top = 0;
            let mut place = 1u32;
            for x in 1..self.size {
                if x == place * self.p as u32 {
                    top += 1;
                    place *= self.p as u32;
                }
                let c = x / place;
                let rest = x % place;
                let cy = smul[c as usize * n + by[top] as usize];
                mul[x as usize * n + y as usize] = add[mul[rest as usize * n + y as usize] as usize * n + cy as usize];
            }
        }
        let one = self.one();
        let mut unit = vec![false; n];
        for x in 0..n {
            unit[x] = (0..n).any(|y| mul[x * n + y] == one);
        }
        Tables { add, mul, unit }
    }

    /// `F_p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        BaseField::prime(p)?;
        Self::from_structure(format!("GF({p})"), p, vec![vec![vec![1]]])
    }

    /// `F_{p^s} = F_p[a]/(m)` with `m` the first monic irreducible polynomial
    /// of degree `s` in lexicographic order of its lower coefficients.
    pub fn finite_field(p: u64, s: u32) -> Result<Self> {
        let k = BaseField::prime(p)?;
        if s == 0 {
            return Err(Error::Invalid("field degree must be positive".into()));
        }
        if s == 1 {
            return Self::prime_field(p);
        }
        let m = first_irreducible(&k, s as usize)?;
        let alg = EtaleAlgebra::new(k, m)?;
        let q = p.pow(s);
        Self::from_etale_named(&alg, format!("GF({q})"))
    }

    /// `L` itself as a finite ring, with basis `1, t, ..., t^{d-1}`.
    pub fn from_etale(l: &EtaleAlgebra) -> Result<Self> {
        Self::from_etale_named(l, l.to_string())
    }

    fn from_etale_named(l: &EtaleAlgebra, name: String) -> Result<Self> {
        let k = l.base();
        if !k.is_finite() {
            return Err(Error::Invalid(format!("{l} is not finite")));
        }
        let d = l.degree();
        let structure = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let prod = l.mul(&l.basis_element(i), &l.basis_element(j));
                        prod.coords().iter().map(|c| k.residue(c)).collect()
                    })
                    .collect()
            })
            .collect();
        Self::from_structure(name, k.characteristic(), structure)
    }

    /// `self ⊗_{F_p} other`; the coordinate of `e_i ⊗ f_j` sits at position
    /// `j·dim(self) + i`, so `a ⊗ f_j` has index `a·|self|^j`.
    pub fn tensor(&self, other: &FiniteRing, name: impl Into<String>) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::RingMismatch(format!("{self} and {other} have different characteristic")));
        }
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut structure = vec![vec![vec![0u64; n]; n]; n];
        for j in 0..db {
            for i in 0..da {
                for l in 0..db {
                    for k in 0..da {
                        let a = &self.structure[i][k];
                        let b = &other.structure[j][l];
                        let out = &mut structure[j * da + i][l * da + k];
                        for (nn, bn) in b.iter().enumerate() {
                            if *bn == 0 {
                                continue;
                            }
                            for (m, am) in a.iter().enumerate() {
                                out[nn * da + m] = (out[nn * da + m] + am * bn) % self.p;
                            }
                        }
                    }
                }
            }
        }
        Self::from_structure(name.into(), self.p, structure)
    }

    /// `self[ε]/(ε²)`.
    pub fn dual_numbers(&self) -> Result<Self> {
        let eps = Self::from_structure(
            "eps".into(),
            self.p,
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
        )?;
        self.tensor(&eps, format!("{}[eps]", self.name))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn coords(&self, mut x: Elem) -> Vec<u64> {
        (0..self.dim)
            .map(|_| {
                let c = x as u64 % self.p;
                x /= self.p as u32;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> Elem {
        coords.iter().rev().fold(0u64, |acc, c| acc * self.p + c % self.p) as Elem
    }

    /// Index of the basis element `e_k`.
    pub fn basis_index(&self, k: usize) -> Elem {
        (self.p as u32).pow(k as u32)
    }

    fn add_digits(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.coords(x), self.coords(y));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.from_coords(&sum)
    }

    fn mul_coords(&self, x: Elem, y: Elem) -> Elem {
        let (a, b) = (self.coords(x), self.coords(y));
        let mut out = vec![0u64; self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| **c != 0) {
                let c = ai * bj % self.p;
                for (k, s) in self.structure[i][j].iter().enumerate() {
                    out[k] = (out[k] + c * s) % self.p;
                }
            }
        }
        self.from_coords(&out)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[x as usize * self.size as usize + y as usize],
            None => self.add_digits(x, y),
        }
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let c: Vec<u64> = self.coords(x).iter().map(|c| (self.p - c) % self.p).collect();
        self.from_coords(&c)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[x as usize * self.size as usize + y as usize],
            None => self.mul_coords(x, y),
        }
    }

    /// `c · x` for `c ∈ F_p`.
    pub fn scale(&self, c: u64, x: Elem) -> Elem {
        let v: Vec<u64> = self.coords(x).iter().map(|a| a * (c % self.p) % self.p).collect();
        self.from_coords(&v)
    }

    pub fn pow(&self, x: Elem, mut e: u32) -> Elem {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        acc
    }

    /// Matrix of multiplication by `x` over `F_p`; column `j` holds `x·e_j`.
    fn mult_matrix(&self, x: Elem) -> Vec<Vec<Scalar>> {
        let cols: Vec<Vec<u64>> = (0..self.dim)
            .map(|j| self.coords(self.mul(x, self.basis_index(j))))
            .collect();
        (0..self.dim)
            .map(|r| (0..self.dim).map(|j| Scalar::Mod(cols[j][r])).collect())
            .collect()
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        match &self.tables {
            Some(t) => t.unit[x as usize],
            None => {
                let k = BaseField::Prime(self.p);
                linalg::rank(&k, &self.mult_matrix(x)) == self.dim
            }
        }
    }

    /// A finite commutative ring is local iff `0` and `1` are its only
    /// idempotents.
    pub fn is_local(&self) -> bool {
        self.elements().filter(|&x| self.mul(x, x) == x).count() == 2
    }

    /// Coordinates in parentheses, or the bare residue for prime fields.
    pub fn display(&self, x: Elem) -> String {
        if self.dim == 1 {
            return x.to_string();
        }
        let parts: Vec<String> = self.coords(x).iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

fn first_irreducible(k: &BaseField, s: usize) -> Result<upoly::UPoly> {
    let p = k.characteristic();
    let count = p
        .checked_pow(s as u32)
        .ok_or_else(|| Error::Invalid("field too large".into()))?;
    for mut idx in 0..count {
        let mut f: upoly::UPoly = (0..s)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                k.from_i64(c as i64)
            })
            .collect();
        f.push(k.one());
        if upoly::is_irreducible(k, &f) {
            return Ok(f);
        }
    }
    Err(Error::Invalid(format!("no irreducible polynomial of degree {s}")))
}
