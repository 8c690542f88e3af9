//! Base fields, monogenic étale algebras over them, and Galois data.

mod etale;
mod field;
mod galois;
pub mod linalg;
pub mod upoly;

pub use etale::{AlgElem, AlgebraSummary, EtaleAlgebra};
pub use field::{is_prime, BaseField, Scalar};
pub use galois::{
    galois_group, rational_roots, tensor_split, GaloisGroup, TensorElem, TensorSquare,
    DEFAULT_HEIGHT_BOUND,
};
