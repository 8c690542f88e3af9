//! Dense linear algebra over a base field. Matrices are row-major.

use super::field::{BaseField, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &BaseField, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &BaseField, m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(k, &mut m).len()
}

/// Solves `m x = rhs` for square or rectangular `m`; `None` when inconsistent.
pub fn solve(k: &BaseField, m: &Matrix, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(k, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn det(k: &BaseField, m: &Matrix) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(&a[i][c])) else {
            return k.zero();
        };
        if p != c {
            a.swap(p, c);
            acc = k.neg(&acc);
        }
        acc = k.mul(&acc, &a[c][c]);
        let inv = k.inv(&a[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            for j in c..n {
                let v = k.mul(&f, &a[c][j]);
                a[i][j] = k.sub(&a[i][j], &v);
            }
        }
    }
    acc
}

pub fn trace(k: &BaseField, m: &Matrix) -> Scalar {
    (0..m.len()).fold(k.zero(), |acc, i| k.add(&acc, &m[i][i]))
}

pub fn mat_mul(k: &BaseField, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(k.zero(), |acc, l| k.add(&acc, &k.mul(&row[l], &b[l][j])))
                })
                .collect()
        })
        .collect()
}

pub fn identity(k: &BaseField, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect())
        .collect()
}
