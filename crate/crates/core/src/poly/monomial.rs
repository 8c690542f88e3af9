use std::cmp::Ordering;

use serde::Serialize;

pub type Exponents = Vec<u32>;

/// Monomial orders. Graded reverse lexicographic is the default everywhere;
/// the other two exist for elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Block order: grevlex on the first `n` variables dominates, ties broken by
    /// grevlex on the rest. Eliminates the first block.
    Elimination(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination(n) => {
                let n = (*n).min(a.len());
                grevlex(&a[..n], &b[..n]).then_with(|| grevlex(&a[n..], &b[n..]))
            }
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

pub fn degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mul(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a / b`, assuming `b | a`.
pub fn div(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::GrevLex;
        // x^2 > xy > y^2 > x > y > 1 in two variables
        let chain = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // x*z^1 vs y^2 in three variables: same degree, last variable decides
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::Elimination(1);
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 2], &[1, 1]), Ordering::Greater);
    }
}
