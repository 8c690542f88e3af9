//! Exhaustive enumeration of points with values in finite test algebras, and
//! the point-level checks built on it.

mod checks;
mod enumerate;
pub mod linear;
mod ring;

pub use checks::{
    adjunction_bijection, dual_point_ring, galois_point_count, jacobian_at, norm_open_points, pack,
    tangent_cross_check, tangent_points, tensor_point_ring, unpack, AdjunctionReport, GaloisCount,
    NormOpenPoints, TangentReport, TestAlgebra,
};
pub use enumerate::{enumerate_points, evaluate, evaluate_generators, CompiledPoly, PointRing, PointSet};
pub use ring::{Elem, FiniteRing};
