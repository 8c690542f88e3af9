//! Affine schemes of finite presentation, morphisms between them, and the
//! constructions and predicates the restriction functor is tested against.

mod affine;
mod morphism;
mod ops;
mod predicates;

pub use affine::{AffineScheme, Provenance};
pub(crate) use affine::fresh_name;
pub use morphism::Morphism;
pub use ops::{
    closed_subscheme, distinguished_open, extended_ring, fiber_product, product, relative_scheme,
    to_point,
};
pub use predicates::{
    is_closed_embedding, is_etale_morphism, is_smooth, relative_presentation,
    EmbeddingCertificate, EtaleReport, SmoothnessReport,
};

#[cfg(test)]
mod tests;
