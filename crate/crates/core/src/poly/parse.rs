//! Polynomial text syntax: integer coefficients, `+ - * ^`, parentheses,
//! division by a nonzero integer, variable names, and the reserved `t` for the
//! generator of the coefficient algebra.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use super::polynomial::{Poly, PolyRing};
use crate::algebra::upoly::{self, UPoly};
use crate::algebra::{BaseField, EtaleAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            offset,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn parse_poly(ring: &Arc<PolyRing>, text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { ring, text, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(ParseError::new(
            p.pos,
            format!("unexpected '{}'", p.peek().unwrap()),
            &["+", "-", "*", "/", "^", "end of polynomial"],
        ));
    }
    Ok(out)
}

/// A univariate polynomial in `t` over `k`, as used for the modulus of an
/// étale algebra.
pub fn parse_modulus(k: BaseField, text: &str) -> Result<UPoly, ParseError> {
    let ring = PolyRing::new(Arc::new(EtaleAlgebra::trivial(k)), vec!["t".into()]);
    let p = parse_poly(&ring, text)?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![k.zero(); deg + 1];
    for (exp, c) in p.terms() {
        out[exp[0] as usize] = c.coords()[0].clone();
    }
    Ok(upoly::trim(&k, out))
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    text: &'a str,
    pos: usize,
}

const OPERAND: &[&str] = &["integer", "variable", "t", "(", "-"];

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                self.skip_ws();
                let at = self.pos;
                let n = self.integer()?;
                let k = self.ring.coef().base();
                let inv = k
                    .inv(&k.from_bigint(&n))
                    .ok_or_else(|| ParseError::new(at, "division by zero", &[]))?;
                acc = acc.scale(&self.ring.coef().from_base(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e = u32::try_from(&e)
                .ok()
                .filter(|&e| e <= 1 << 16)
                .ok_or_else(|| ParseError::new(at, "exponent out of range", &[]))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected an integer", &["integer"]));
        }
        Ok(self.text[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::new(self.pos, "unclosed parenthesis", &[")"]));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let k = self.ring.coef().base();
                Ok(Poly::scalar(self.ring, k.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if name == "t" && self.ring.var_index("t").is_none() {
                    let l = self.ring.coef();
                    if l.is_trivial() {
                        return Err(ParseError::new(
                            start,
                            "the generator t is only available over an algebra",
                            &["variable"],
                        ));
                    }
                    return Ok(Poly::constant(self.ring, l.generator()));
                }
                match self.ring.var_index(name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(ParseError {
                        offset: start,
                        message: format!("unknown variable '{name}'"),
                        expected: self.ring.vars().to_vec(),
                    }),
                }
            }
            Some(c) => Err(ParseError::new(start, format!("unexpected '{c}'"), OPERAND)),
            None => Err(ParseError::new(start, "unexpected end of polynomial", OPERAND)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_coefficients_and_precedence() {
        let r = PolyRing::new(
            Arc::new(EtaleAlgebra::trivial(BaseField::Rationals)),
            vec!["x".into(), "y".into()],
        );
        let p = parse_poly(&r, "-x^2*y/2 + 3*(x - y)^2").unwrap();
        assert_eq!(p.to_string(), "-1/2*x^2*y + 3*x^2 - 6*x*y + 3*y^2");
    }

    #[test]
    fn errors_carry_offsets() {
        let r = PolyRing::new(
            Arc::new(EtaleAlgebra::trivial(BaseField::Rationals)),
            vec!["x".into()],
        );
        let e = parse_poly(&r, "x + z").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.expected, vec!["x".to_string()]);
        let e = parse_poly(&r, "x +").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse_poly(&r, "t*x").is_err());
        assert!(parse_poly(&r, "(x").is_err());
    }

    #[test]
    fn moduli() {
        let k = BaseField::prime(2).unwrap();
        let f = parse_modulus(k, "t^2 + t + 1").unwrap();
        assert_eq!(f, vec![k.one(), k.one(), k.one()]);
        assert_eq!(parse_modulus(k, "t^2 + 2*t").unwrap(), vec![k.zero(), k.zero(), k.one()]);
        assert!(parse_modulus(k, "t + x").is_err());
    }
}
