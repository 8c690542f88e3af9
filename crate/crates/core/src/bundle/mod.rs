//! Vector bundles as idempotent matrices, their total spaces, their Weil
//! restrictions, and normal bundles of complete intersections.

mod normal;
mod presentation;
mod restrict;

pub use normal::{normal_compat, normal_presentation, FiberwiseResult, NormalBundle, NormalCompatReport};
pub use presentation::{
    coefficient_point_ring, make_bundle, rank_at, rank_check, total_space, Bundle, TotalSpace,
};
pub use restrict::{block_matrix, restrict_bundle, restrict_zero_section, RestrictedBundle, ZeroSectionReport};
