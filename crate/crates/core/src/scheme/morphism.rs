use std::sync::Arc;

use super::affine::AffineScheme;
use crate::error::{Error, Result};
use crate::poly::{embed_coefficient_fn, Poly};

/// A morphism `X → Y` of affine schemes, given by one polynomial on `X` per
/// coordinate of `Y`.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<AffineScheme>,
    target: Arc<AffineScheme>,
    images: Vec<Poly>,
}

impl Morphism {
    /// Validates arity, rings, and that every generator of the target pulls
    /// back into the ideal of the source.
    pub fn new(
        source: Arc<AffineScheme>,
        target: Arc<AffineScheme>,
        images: Vec<Poly>,
        cap: u32,
    ) -> Result<Self> {
        let m = Self::new_unchecked(source, target, images)?;
        m.validate(cap)?;
        Ok(m)
    }

    /// Checks arity and rings but not well-definedness.
    pub fn new_unchecked(
        source: Arc<AffineScheme>,
        target: Arc<AffineScheme>,
        images: Vec<Poly>,
    ) -> Result<Self> {
        if images.len() != target.nvars() {
            return Err(Error::ArityMismatch {
                expected: target.nvars(),
                found: images.len(),
            });
        }
        if source.coef() != target.coef() {
            return Err(Error::RingMismatch(format!(
                "source over {} but target over {}",
                source.coef(),
                target.coef()
            )));
        }
        for im in &images {
            if **im.ring() != **source.ring() {
                return Err(Error::RingMismatch(format!(
                    "coordinate image {im} is not a function on the source"
                )));
            }
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(x: &Arc<AffineScheme>) -> Self {
        let images = (0..x.nvars()).map(|i| x.var(i)).collect();
        Morphism {
            source: x.clone(),
            target: x.clone(),
            images,
        }
    }

    pub fn validate(&self, cap: u32) -> Result<()> {
        let gb = self.source.groebner(cap)?;
        for (index, g) in self.target.generators().iter().enumerate() {
            let residue = gb.normal_form(&self.pull_back(g)?);
            if !residue.is_zero() {
                return Err(Error::NotWellDefined {
                    index,
                    generator: g.to_string(),
                    residue: residue.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<AffineScheme> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AffineScheme> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// `φ^#(p)` for a function `p` on the target.
    pub fn pull_back(&self, p: &Poly) -> Result<Poly> {
        p.substitute_into(self.source.ring(), &self.images)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if *other.source != *self.target {
            return Err(Error::RingMismatch("morphisms are not composable".into()));
        }
        let images = other
            .images
            .iter()
            .map(|p| self.pull_back(p))
            .collect::<Result<_>>()?;
        Ok(Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }

    /// Coordinates on which two parallel morphisms differ modulo the source
    /// ideal, with the normal form of the difference.
    pub fn differences(&self, other: &Morphism, cap: u32) -> Result<Vec<(usize, Poly)>> {
        if *self.source != *other.source || self.images.len() != other.images.len() {
            return Err(Error::RingMismatch("morphisms are not parallel".into()));
        }
        let gb = self.source.groebner(cap)?;
        Ok(self
            .images
            .iter()
            .zip(&other.images)
            .enumerate()
            .filter_map(|(i, (a, b))| {
                let r = gb.normal_form(&(a - b));
                (!r.is_zero()).then_some((i, r))
            })
            .collect())
    }

    pub fn is_identity(&self, cap: u32) -> Result<Vec<(usize, Poly)>> {
        self.differences(&Morphism::identity(&self.source), cap)
    }

    /// Base change of a morphism between base-field schemes to `L`.
    pub fn base_change(
        &self,
        source: &Arc<AffineScheme>,
        target: &Arc<AffineScheme>,
    ) -> Result<Morphism> {
        let embed = embed_coefficient_fn(self.source.coef(), source.coef())?;
        let images = self
            .images
            .iter()
            .map(|p| p.map_coefficients(source.ring(), &embed))
            .collect();
        Morphism::new_unchecked(source.clone(), target.clone(), images)
    }

    pub fn display_images(&self) -> Vec<String> {
        self.images.iter().map(|p| p.to_string()).collect()
    }
}
