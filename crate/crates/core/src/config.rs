use serde::Serialize;

use crate::algebra::DEFAULT_HEIGHT_BOUND;
use crate::poly::DEFAULT_DEGREE_CAP;

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

/// How point enumeration distributes work.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Sequential,
    /// Splits the search by the first coordinate across a thread pool. Without
    /// the `parallel` feature this runs sequentially.
    #[default]
    Parallel,
}

/// Resource limits shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    /// Maximum number of assignments evaluated by one enumeration.
    pub point_budget: u64,
    /// Maximum degree of an S-polynomial in Buchberger's algorithm.
    pub gb_degree_cap: u32,
    /// Height bound for rational root search.
    pub height_bound: u64,
    pub strategy: Strategy,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            point_budget: DEFAULT_POINT_BUDGET,
            gb_degree_cap: DEFAULT_DEGREE_CAP,
            height_bound: DEFAULT_HEIGHT_BOUND,
            strategy: Strategy::default(),
        }
    }
}
