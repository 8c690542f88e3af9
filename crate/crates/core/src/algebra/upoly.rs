//! Dense univariate polynomials over a base field, coefficients stored from
//! the constant term upwards with no trailing zeros.

use super::field::{BaseField, Scalar};

pub type UPoly = Vec<Scalar>;

pub fn trim(k: &BaseField, mut p: UPoly) -> UPoly {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn degree(p: &UPoly) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn derivative(k: &BaseField, p: &UPoly) -> UPoly {
    let d = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
        .collect();
    trim(k, d)
}

pub fn sub(k: &BaseField, a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let zero = k.zero();
    let out = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(k, out)
}

pub fn mul(k: &BaseField, a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem(k: &BaseField, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = k.inv(&b[db]).expect("nonzero leading coefficient");
    let mut rem = a.clone();
    let mut quot = vec![k.zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = k.mul(&rem[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            rem[i + shift] = k.sub(&rem[i + shift], &k.mul(&c, bc));
        }
        quot[shift] = c;
        rem = trim(k, rem);
    }
    (trim(k, quot), rem)
}

pub fn monic(k: &BaseField, p: &UPoly) -> UPoly {
    match p.last() {
        None => Vec::new(),
        Some(l) => {
            let li = k.inv(l).expect("nonzero");
            p.iter().map(|c| k.mul(c, &li)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(k: &BaseField, a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (trim(k, a.clone()), trim(k, b.clone()));
    while !y.is_empty() {
        let (_, r) = div_rem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

pub fn is_one(k: &BaseField, p: &UPoly) -> bool {
    p.len() == 1 && k.is_one(&p[0])
}

pub fn eval(k: &BaseField, p: &UPoly, x: &Scalar) -> Scalar {
    p.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

pub fn display(k: &BaseField, p: &UPoly, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let negative = k.is_negative(c);
        let abs = if negative { k.neg(c) } else { c.clone() };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = match (mono.is_empty(), k.is_one(&abs)) {
            (true, _) => k.display(&abs),
            (false, true) => mono,
            (false, false) => format!("{}*{mono}", k.display(&abs)),
        };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&term),
            (true, true) => {
                out.push('-');
                out.push_str(&term);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&term);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&term);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `base^e mod m`.
pub fn pow_mod(k: &BaseField, base: &UPoly, mut e: u64, m: &UPoly) -> UPoly {
    let mut acc = div_rem(k, &vec![k.one()], m).1;
    let mut b = div_rem(k, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = div_rem(k, &mul(k, &acc, &b), m).1;
        }
        e >>= 1;
        if e > 0 {
            b = div_rem(k, &mul(k, &b, &b), m).1;
        }
    }
    acc
}

/// Irreducibility over a prime field: `f` of degree `d` is irreducible iff
/// `gcd(t^{p^i} - t, f) = 1` for every `i <= d/2`.
pub fn is_irreducible(k: &BaseField, f: &UPoly) -> bool {
    let p = k.characteristic();
    assert!(p > 0, "irreducibility test needs a finite field");
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    let t = vec![k.zero(), k.one()];
    let mut power = div_rem(k, &t, f).1;
    for _ in 1..=d / 2 {
        power = pow_mod(k, &power, p, f);
        let g = gcd(k, &sub(k, &power, &t), f);
        if !is_one(k, &g) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_over_small_fields() {
        let k = BaseField::prime(2).unwrap();
        assert!(is_irreducible(&k, &poly(&k, &[1, 1, 1])));
        assert!(!is_irreducible(&k, &poly(&k, &[1, 0, 1])));
        // (t^2 + t + 1)^2 has no roots but is reducible
        assert!(!is_irreducible(&k, &poly(&k, &[1, 0, 1, 0, 1])));
        assert!(is_irreducible(&k, &poly(&k, &[1, 1, 0, 0, 1])));
        let f5 = BaseField::prime(5).unwrap();
        assert!(is_irreducible(&f5, &poly(&f5, &[2, 0, 1])));
        assert!(!is_irreducible(&f5, &poly(&f5, &[1, 0, 1])));
    }

    fn poly(k: &BaseField, c: &[i64]) -> UPoly {
        trim(k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    #[test]
    fn gcd_over_q() {
        let q = BaseField::Rationals;
        // (t-1)(t+1) and (t-1)(t+2)
        let a = poly(&q, &[-1, 0, 1]);
        let b = poly(&q, &[-2, 1, 1]);
        assert_eq!(gcd(&q, &a, &b), poly(&q, &[-1, 1]));
    }

    #[test]
    fn derivative_vanishes_in_char_two() {
        let k = BaseField::prime(2).unwrap();
        assert!(derivative(&k, &poly(&k, &[0, 0, 1])).is_empty());
        assert_eq!(derivative(&k, &poly(&k, &[1, 1, 1])), poly(&k, &[1]));
    }

    #[test]
    fn division_identity() {
        let k = BaseField::prime(7).unwrap();
        let a = poly(&k, &[3, 1, 4, 1, 5]);
        let b = poly(&k, &[2, 6, 1]);
        let (q, r) = div_rem(&k, &a, &b);
        let back = trim(&k, {
            let m = mul(&k, &q, &b);
            let n = m.len().max(r.len());
            (0..n)
                .map(|i| {
                    k.add(
                        m.get(i).unwrap_or(&k.zero()),
                        r.get(i).unwrap_or(&k.zero()),
                    )
                })
                .collect()
        });
        assert_eq!(back, a);
    }
}
