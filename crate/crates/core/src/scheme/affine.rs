use std::sync::{Arc, OnceLock};

use crate::algebra::{BaseField, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::poly::{embed_coefficient_fn, groebner, GroebnerBasis, Poly, PolyRing};

/// How a scheme was built. Some predicates need this: étaleness is decided on
/// a relative presentation.
#[derive(Clone, Debug)]
pub enum Provenance {
    Raw,
    /// `D(g)` of `parent`: the parent's variables plus a last variable `y`
    /// with `y*g - 1` as last generator.
    Open { parent: Arc<AffineScheme>, g: Poly },
    /// The parent's variables, its generators followed by `extra`.
    Closed { parent: Arc<AffineScheme>, extra: Vec<Poly> },
    Product,
    /// Weil restriction; `pruned` lists the dropped component generators as
    /// `(source generator, basis index)`.
    Restriction { pruned: Vec<(usize, usize)> },
    /// `base[z_1..z_s]/J`: the base variables come first, then `fiber_vars`
    /// new ones; generators are the base generators followed by `J`.
    Relative { base: Arc<AffineScheme>, fiber_vars: usize },
}

/// `Spec C[x_1..x_n]/I` for a coefficient algebra `C` (the base field or `L`).
#[derive(Clone, Debug)]
pub struct AffineScheme {
    ring: Arc<PolyRing>,
    generators: Vec<Poly>,
    provenance: Provenance,
    gb: OnceLock<GroebnerBasis>,
}

impl PartialEq for AffineScheme {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.generators == other.generators
    }
}

pub(crate) fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

impl AffineScheme {
    pub fn new(ring: Arc<PolyRing>, generators: Vec<Poly>) -> Result<Self> {
        for g in &generators {
            if **g.ring() != *ring {
                return Err(Error::RingMismatch(format!(
                    "generator {g} does not live in the scheme's ring"
                )));
            }
        }
        Ok(AffineScheme {
            ring,
            generators,
            provenance: Provenance::Raw,
            gb: OnceLock::new(),
        })
    }

    pub fn affine_space(coef: Arc<EtaleAlgebra>, vars: Vec<String>) -> Self {
        AffineScheme::new(PolyRing::new(coef, vars), Vec::new()).expect("no generators")
    }

    /// `Spec C` with no variables.
    pub fn point(coef: Arc<EtaleAlgebra>) -> Self {
        Self::affine_space(coef, Vec::new())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn coef(&self) -> &Arc<EtaleAlgebra> {
        self.ring.coef()
    }

    pub fn base_field(&self) -> BaseField {
        self.ring.coef().base()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The reduced Gröbner basis of the ideal, computed once.
    pub fn groebner(&self, cap: u32) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = groebner(&self.ring, &self.generators, cap)?;
        Ok(self.gb.get_or_init(|| g))
    }

    pub fn normal_form(&self, p: &Poly, cap: u32) -> Result<Poly> {
        Ok(self.groebner(cap)?.normal_form(p))
    }

    pub fn is_empty(&self, cap: u32) -> Result<bool> {
        Ok(self.groebner(cap)?.is_unit())
    }

    pub fn dimension(&self, cap: u32) -> Result<i64> {
        Ok(self.groebner(cap)?.krull_dimension())
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(&self.ring, i)
    }

    /// Reads a scheme over the base field as a scheme over `l`.
    pub fn base_change(&self, l: &Arc<EtaleAlgebra>) -> Result<AffineScheme> {
        let ring = self.ring.over(l.clone());
        let embed = embed_coefficient_fn(self.coef(), l)?;
        let gens = self
            .generators
            .iter()
            .map(|g| g.map_coefficients(&ring, &embed))
            .collect();
        AffineScheme::new(ring, gens)
    }

    /// The same presentation with additional variables appended.
    pub fn extend_vars(&self, extra: &[String]) -> (Arc<PolyRing>, Vec<Poly>) {
        let mut vars = self.vars().to_vec();
        vars.extend(extra.iter().cloned());
        let ring = PolyRing::new(self.coef().clone(), vars);
        let positions: Vec<usize> = (0..self.nvars()).collect();
        let gens = self
            .generators
            .iter()
            .map(|g| g.relabel(&ring, &positions))
            .collect();
        (ring, gens)
    }

    pub fn display_generators(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}
