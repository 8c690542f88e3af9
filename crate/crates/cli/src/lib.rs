//! A small language for declaring fields, étale algebras, affine schemes,
//! morphisms and vector bundles, and a runner that restricts them and checks
//! the comparison isomorphisms, reporting deterministic JSON.

pub mod corpus;
pub mod parse;
pub mod run;
pub mod session;

pub use parse::{parse_session, parse_session_with, DslError};
pub use run::{run_command, run_session, Report, RunError};
pub use session::{Action, Command, Decl, Location, Session, Status, Target};
