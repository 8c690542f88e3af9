//! Pass/fail records shared by the comparison routines.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scheme::{AffineScheme, Morphism};

/// One named identity check with its failures, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, failures: Vec<String>) -> Self {
        Check {
            name: name.into(),
            passed: failures.is_empty(),
            failures,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }

    pub fn fail(name: impl Into<String>, failure: impl Into<String>) -> Self {
        Self::new(name, vec![failure.into()])
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Builds a morphism, turning a well-definedness failure into a failed check.
pub fn checked_morphism(
    name: &str,
    source: &Arc<AffineScheme>,
    target: &Arc<AffineScheme>,
    images: Vec<Poly>,
    cap: u32,
) -> Result<(Option<Morphism>, Check)> {
    match Morphism::new(source.clone(), target.clone(), images, cap) {
        Ok(m) => Ok((Some(m), Check::pass(format!("{name} is well defined")))),
        Err(e @ (Error::NotWellDefined { .. } | Error::ArityMismatch { .. })) => {
            Ok((None, Check::fail(format!("{name} is well defined"), e.to_string())))
        }
        Err(e) => Err(e),
    }
}

/// Checks that `m` is the identity modulo the ideal of its source, naming
/// each coordinate that is not.
pub fn identity_check(name: &str, m: &Morphism, cap: u32) -> Result<Check> {
    let vars = m.source().vars().to_vec();
    let failures = m
        .is_identity(cap)?
        .into_iter()
        .map(|(i, r)| format!("{} maps to {} + {}", vars[i], vars[i], r))
        .collect();
    Ok(Check::new(name, failures))
}

/// `second ∘ first` is the identity.
pub fn composite_check(name: &str, first: &Morphism, second: &Morphism, cap: u32) -> Result<Check> {
    let c = first.then(second)?;
    identity_check(name, &c, cap)
}
