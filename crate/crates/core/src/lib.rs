//! Exact Weil restriction of affine schemes along finite étale algebras
//! `L = k[t]/(f)`, with verification of the comparison isomorphisms by
//! Gröbner normal forms and by enumerating points over finite test algebras.

pub mod algebra;
pub mod bundle;
pub mod config;
pub mod error;
pub mod points;
pub mod poly;
pub mod report;
pub mod scheme;
pub mod thom;
pub mod weilres;

pub use config::{Config, Strategy};
pub use error::{Error, Result};
