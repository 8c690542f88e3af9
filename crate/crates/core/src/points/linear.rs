//! `F_p`-linear algebra on modules over a finite ring, used for tangent
//! spaces over rings that need not be fields.

use super::ring::{Elem, FiniteRing};
use crate::algebra::{linalg, BaseField, Scalar};

fn flatten(ring: &FiniteRing, v: &[Elem]) -> Vec<Scalar> {
    v.iter()
        .flat_map(|&x| ring.coords(x).into_iter().map(Scalar::Mod))
        .collect()
}

/// Matrix over `F_p` of `v ↦ M v` for `M` with entries in the ring; `ncols`
/// is the length of `v`.
pub fn fp_matrix(ring: &FiniteRing, m: &[Vec<Elem>], ncols: usize) -> linalg::Matrix {
    let dim = ring.dim();
    let rows = m.len() * dim;
    let mut out = vec![vec![Scalar::Mod(0); ncols * dim]; rows];
    for c in 0..ncols {
        for b in 0..dim {
            let e = ring.basis_index(b);
            for (r, row) in m.iter().enumerate() {
                for (k, x) in ring.coords(ring.mul(row[c], e)).into_iter().enumerate() {
                    out[r * dim + k][c * dim + b] = Scalar::Mod(x);
                }
            }
        }
    }
    out
}

/// An `F_p`-basis of `{v : M v = 0}`.
pub fn kernel(ring: &FiniteRing, m: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let k = BaseField::Prime(ring.characteristic());
    let dim = ring.dim();
    let mut a = fp_matrix(ring, m, ncols);
    let width = ncols * dim;
    if a.is_empty() {
        a.push(vec![Scalar::Mod(0); width]);
    }
    let pivots = linalg::rref(&k, &mut a);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut flat = vec![0u64; width];
            flat[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                flat[pc] = k.residue(&k.neg(&a[r][f]));
            }
            flat.chunks(dim).map(|c| ring.from_coords(c)).collect()
        })
        .collect()
}

/// `F_p`-dimension of the span of `vectors`.
pub fn span_rank(ring: &FiniteRing, vectors: &[Vec<Elem>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let k = BaseField::Prime(ring.characteristic());
    let m: linalg::Matrix = vectors.iter().map(|v| flatten(ring, v)).collect();
    linalg::rank(&k, &m)
}

/// Whether two lists of vectors span the same `F_p`-subspace.
pub fn same_span(ring: &FiniteRing, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> bool {
    let ra = span_rank(ring, a);
    let both: Vec<Vec<Elem>> = a.iter().chain(b).cloned().collect();
    ra == span_rank(ring, b) && ra == span_rank(ring, &both)
}

/// Every `F_p`-combination of `basis`; `p^{len}` vectors of length `n`.
pub fn span_elements(ring: &FiniteRing, basis: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![ring.zero(); n]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * ring.characteristic() as usize);
        for v in &out {
            for c in 0..ring.characteristic() {
                next.push(
                    v.iter()
                        .zip(b)
                        .map(|(&x, &y)| ring.add(x, ring.scale(c, y)))
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}
