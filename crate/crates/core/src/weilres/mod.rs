//! Weil restriction along `L/k` by coefficient expansion, the adjunction
//! maps, and the comparison isomorphisms between restricted constructions.

mod adjunction;
mod compat;
mod norm;
mod restrict;
mod twist;

pub use adjunction::{counit, triangle_identities, unit, TriangleReport, Unit};
pub(crate) use compat::positional_comparison;
pub use compat::{
    affine_shadow, base_change_compat, fiber_product_compat, ComparisonReport, ShadowReport,
};
pub use norm::{multiplication_matrix, norm_of, restrict_open, NormOpenReport};
pub use restrict::{
    restrict_morphism, restrict_partial, restrict_relative, restrict_scheme, restricted_name, Expansion,
    Restriction,
};
pub use twist::{galois_decomposition, idempotent_checks, twist, twist_product, DecompositionReport};

#[cfg(test)]
mod tests;
