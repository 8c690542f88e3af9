use std::sync::Arc;

use super::polynomial::{Poly, PolyRing};

/// Row-major matrix of polynomials.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// Entry `(a, i)` is the partial derivative of `gens[a]` by variable `vars[i]`.
pub fn jacobian(gens: &[Poly], vars: &[usize]) -> PolyMatrix {
    gens.iter()
        .map(|g| vars.iter().map(|&v| g.derivative(v)).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn det(ring: &Arc<PolyRing>, m: &PolyMatrix) -> Poly {
    let n = m.len();
    let cols: Vec<usize> = (0..n).collect();
    let rows: Vec<usize> = (0..n).collect();
    sub_det(ring, m, &rows, &cols)
}

fn sub_det(ring: &Arc<PolyRing>, m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
    match rows.len() {
        0 => Poly::one(ring),
        1 => m[rows[0]][cols[0]].clone(),
        _ => {
            let mut acc = Poly::zero(ring);
            for (c, &col) in cols.iter().enumerate() {
                let entry = &m[rows[0]][col];
                if entry.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
                let term = entry * &sub_det(ring, m, &rows[1..], &rest);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `size × size` minors, nonzero ones only, in lexicographic order of
/// (row subset, column subset). The empty minor is `1`.
pub fn minors(ring: &Arc<PolyRing>, m: &PolyMatrix, size: usize) -> Vec<Poly> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if size == 0 {
        return vec![Poly::one(ring)];
    }
    if size > rows.min(cols) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for r in subsets(rows, size) {
        for c in subsets(cols, size) {
            let d = sub_det(ring, m, &r, &c);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

pub fn mat_mul(ring: &Arc<PolyRing>, a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Poly::zero(ring), |acc, l| &acc + &(&row[l] * &b[l][j]))
                })
                .collect()
        })
        .collect()
}
