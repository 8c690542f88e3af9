use std::sync::Arc;

use crate::algebra::{AlgElem, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::poly::{embed_coefficient_fn, groebner, Poly, PolyRing};
use crate::scheme::{fresh_name, relative_presentation, relative_scheme, AffineScheme, Morphism, Provenance};

/// Name of the `j`-th coordinate of the source variable `var`.
pub fn restricted_name(var: &str, j: usize) -> String {
    format!("{var}_{j}")
}

/// The coefficient-expansion substitution `x_i ↦ Σ_j x_{i,j} t^j` from the
/// ring of a scheme over `L` to polynomial rings over `k` and over `L` in the
/// restricted variables. Variables past `expanded` are carried over unchanged.
#[derive(Clone, Debug)]
pub struct Expansion {
    algebra: Arc<EtaleAlgebra>,
    source_ring: Arc<PolyRing>,
    expanded: usize,
    k_ring: Arc<PolyRing>,
    l_ring: Arc<PolyRing>,
    images: Vec<Poly>,
}

impl Expansion {
    pub fn new(source_ring: &Arc<PolyRing>, expanded: usize) -> Self {
        let l = source_ring.coef().clone();
        let d = l.degree();
        let mut vars = Vec::new();
        for v in &source_ring.vars()[..expanded] {
            for j in 0..d {
                vars.push(restricted_name(v, j));
            }
        }
        for v in &source_ring.vars()[expanded..] {
            let name = fresh_name(v, &vars);
            vars.push(name);
        }
        let k_ring = PolyRing::new(Arc::new(EtaleAlgebra::trivial(l.base())), vars);
        let l_ring = k_ring.over(l.clone());
        let images = (0..source_ring.nvars())
            .map(|i| {
                if i < expanded {
                    (0..d).fold(Poly::zero(&l_ring), |acc, j| {
                        &acc + &Poly::var(&l_ring, i * d + j).scale(&l.basis_element(j))
                    })
                } else {
                    Poly::var(&l_ring, expanded * d + (i - expanded))
                }
            })
            .collect();
        Expansion {
            algebra: l,
            source_ring: source_ring.clone(),
            expanded,
            k_ring,
            l_ring,
            images,
        }
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.algebra.degree()
    }

    /// Restricted ring over `k`.
    pub fn k_ring(&self) -> &Arc<PolyRing> {
        &self.k_ring
    }

    /// Restricted variables over `L`, the ring of `R(X)_L`.
    pub fn l_ring(&self) -> &Arc<PolyRing> {
        &self.l_ring
    }

    /// `Σ_j x_{i,j} t^j` for every source variable.
    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Index of `x_{i,j}` among the restricted variables.
    pub fn index(&self, i: usize, j: usize) -> usize {
        if i < self.expanded {
            i * self.degree() + j
        } else {
            self.expanded * self.degree() + (i - self.expanded)
        }
    }

    /// The components `p_0, ..., p_{d-1}` over `k` with
    /// `p(Σ x_{i,j} t^j) = Σ p_j t^j`.
    pub fn expand(&self, p: &Poly) -> Result<Vec<Poly>> {
        if **p.ring() != *self.source_ring {
            return Err(Error::RingMismatch(format!("{p} is not on the restricted scheme")));
        }
        let e = p.substitute_into(&self.l_ring, &self.images)?;
        Ok(self.split(&e))
    }

    /// Splits a polynomial over `L` in the restricted variables into its
    /// coefficient components.
    pub fn split(&self, p: &Poly) -> Vec<Poly> {
        (0..self.degree())
            .map(|j| {
                Poly::from_terms(
                    &self.k_ring,
                    p.terms()
                        .iter()
                        .map(|(e, c)| (e.clone(), AlgElem(vec![c.0[j].clone()]))),
                )
            })
            .collect()
    }

    /// `Σ_j p_j t^j` over `L`.
    pub fn combine(&self, components: &[Poly]) -> Poly {
        let l = &self.algebra;
        let embed = embed_coefficient_fn(self.k_ring.coef(), l).expect("same base field");
        components
            .iter()
            .enumerate()
            .fold(Poly::zero(&self.l_ring), |acc, (j, c)| {
                &acc + &c.map_coefficients(&self.l_ring, &embed).scale(&l.basis_element(j))
            })
    }

    /// Reads a polynomial over `k` in the restricted variables over `L`.
    pub fn to_l(&self, p: &Poly) -> Poly {
        let embed = embed_coefficient_fn(self.k_ring.coef(), &self.algebra).expect("same base field");
        p.map_coefficients(&self.l_ring, &embed)
    }
}

/// The Weil restriction `R(X)` of a scheme `X` over `L`, with the data
/// needed to map into and out of it.
#[derive(Clone, Debug)]
pub struct Restriction {
    source: Arc<AffineScheme>,
    scheme: Arc<AffineScheme>,
    expansion: Expansion,
    /// Components of every source generator, `[generator][basis index]`.
    components: Vec<Vec<Poly>>,
    pruned: Vec<(usize, usize)>,
}

/// `R(X)`: expand every coordinate along the power basis and take the
/// coefficient components of every generator. Components that are zero or
/// lie in the ideal of the remaining ones are dropped.
pub fn restrict_scheme(x: &Arc<AffineScheme>, cap: u32) -> Result<Restriction> {
    restrict_partial(x, x.nvars(), cap)
}

/// Restriction relative to the variables past `expanded`, which are treated as
/// coordinates of the base and left unexpanded.
pub fn restrict_partial(x: &Arc<AffineScheme>, expanded: usize, cap: u32) -> Result<Restriction> {
    let expansion = Expansion::new(x.ring(), expanded);
    let components: Vec<Vec<Poly>> = x
        .generators()
        .iter()
        .map(|g| expansion.expand(g))
        .collect::<Result<_>>()?;
    let mut kept: Vec<((usize, usize), Poly)> = Vec::new();
    let mut pruned = Vec::new();
    for (a, comps) in components.iter().enumerate() {
        for (j, c) in comps.iter().enumerate() {
            if c.is_zero() {
                pruned.push((a, j));
            } else {
                kept.push(((a, j), c.clone()));
            }
        }
    }
    // drop members of the ideal generated by the others, in order. Pruning
    // never changes the ideal, so one basis of it settles properness for
    // every subset.
    let mut proper: Option<bool> = None;
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let others: Vec<Poly> = kept
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, (_, p))| p.clone())
            .collect();
        if has_private_power(&kept[i].1, &others) {
            let proper = match proper {
                Some(b) => b,
                None => {
                    let all: Vec<Poly> = kept.iter().map(|(_, p)| p.clone()).collect();
                    *proper.insert(!groebner(expansion.k_ring(), &all, cap)?.is_unit())
                }
            };
            if proper {
                i += 1;
                continue;
            }
        }
        if groebner(expansion.k_ring(), &others, cap)?.contains(&kept[i].1) {
            pruned.push(kept.remove(i).0);
        } else {
            i += 1;
        }
    }
    pruned.sort();
    let gens = kept.into_iter().map(|(_, p)| p).collect();
    let scheme = AffineScheme::new(expansion.k_ring().clone(), gens)?.with_provenance(
        Provenance::Restriction {
            pruned: pruned.clone(),
        },
    );
    Ok(Restriction {
        source: x.clone(),
        scheme: Arc::new(scheme),
        expansion,
        components,
        pruned,
    })
}

/// Whether `f` has a term `c·v^k`, `k > 0`, in a variable `v` that none of
/// `others` mentions. Such an `f` lies in the ideal of `others` only if that
/// ideal is the unit ideal: its coefficient at `v^k` would be the unit `c`.
fn has_private_power(f: &Poly, others: &[Poly]) -> bool {
    let used: Vec<usize> = others.iter().flat_map(|g| g.support()).collect();
    f.terms().iter().any(|(exp, _)| {
        let mut vars = exp.iter().enumerate().filter(|(_, e)| **e > 0);
        matches!((vars.next(), vars.next()), (Some((v, _)), None) if !used.contains(&v))
    })
}

impl Restriction {
    pub fn source(&self) -> &Arc<AffineScheme> {
        &self.source
    }

    /// `R(X)` over `k`.
    pub fn scheme(&self) -> &Arc<AffineScheme> {
        &self.scheme
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    pub fn components(&self) -> &[Vec<Poly>] {
        &self.components
    }

    pub fn pruned(&self) -> &[(usize, usize)] {
        &self.pruned
    }

    /// `R(X)_L`: the same presentation read over `L`.
    pub fn base_changed(&self) -> Result<Arc<AffineScheme>> {
        Ok(Arc::new(self.scheme.base_change(self.expansion.algebra())?))
    }
}

/// `R(φ): R(X) → R(Y)`; the image of `y_{u,j}` is the `j`-th component of the
/// expanded `φ^#(y_u)`.
pub fn restrict_morphism(phi: &Morphism, rx: &Restriction, ry: &Restriction, cap: u32) -> Result<Morphism> {
    if *rx.source != **phi.source() || *ry.source != **phi.target() {
        return Err(Error::RingMismatch("restrictions do not match the morphism".into()));
    }
    let mut images = vec![Poly::zero(rx.scheme.ring()); ry.scheme.nvars()];
    for (u, im) in phi.images().iter().enumerate() {
        let comps = rx.expansion.expand(im)?;
        if u < ry.expansion.expanded {
            for (j, c) in comps.into_iter().enumerate() {
                images[ry.expansion.index(u, j)] = c;
            }
        } else {
            // an unexpanded coordinate keeps only its constant component
            images[ry.expansion.index(u, 0)] = comps.into_iter().next().unwrap();
        }
    }
    Morphism::new(rx.scheme.clone(), ry.scheme.clone(), images, cap)
}

/// For `Y = X[z_1..z_s]/J` presented relative to `X`, the relative
/// presentation `R(Y) = R(X)[z_{i,j}]/(components of J)`.
pub fn restrict_relative(y: &Arc<AffineScheme>, cap: u32) -> Result<Arc<AffineScheme>> {
    let (base, _, relations) = relative_presentation(y)?;
    let rb = restrict_scheme(&base, cap)?;
    let ey = Expansion::new(y.ring(), y.nvars());
    let fiber: Vec<String> = ey.k_ring().vars()[rb.scheme().nvars()..].to_vec();
    let ring = rb.scheme().extend_vars(&fiber).0;
    let mut comps = Vec::new();
    for r in &relations {
        for c in ey.expand(r)? {
            if !c.is_zero() {
                comps.push(c.relabel(&ring, &(0..ring.nvars()).collect::<Vec<_>>()));
            }
        }
    }
    Ok(relative_scheme(rb.scheme(), &fiber, comps)?.0)
}
