//! Multivariate polynomials over a base field or an étale algebra, Gröbner
//! bases, Jacobians and minors.

mod groebner;
mod matrix;
pub mod monomial;
mod parse;
mod polynomial;

pub use groebner::{groebner, is_unit_ideal, GroebnerBasis, Ideal, DEFAULT_DEGREE_CAP};
pub use matrix::{det, jacobian, mat_mul, minors, PolyMatrix};
pub use monomial::{Exponents, MonomialOrder};
pub use parse::{is_identifier, parse_modulus, parse_poly, ParseError};
pub use polynomial::{embed_coefficient_fn, Poly, PolyRing};
