use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use weilkit::algebra::EtaleAlgebra;
use weilkit::bundle::Bundle;
use weilkit::points::TestAlgebra;
use weilkit::poly::Poly;
use weilkit::scheme::{AffineScheme, Morphism};
use weilkit::Config;

/// 1-based position in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug)]
pub enum Decl {
    /// A base field, kept as the trivial algebra over itself.
    Field(Arc<EtaleAlgebra>),
    Algebra(Arc<EtaleAlgebra>),
    Scheme(Arc<AffineScheme>),
    Morphism(Arc<Morphism>),
    Bundle(Bundle),
}

impl Decl {
    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Field(_) => "field",
            Decl::Algebra(_) => "algebra",
            Decl::Scheme(_) => "scheme",
            Decl::Morphism(_) => "morphism",
            Decl::Bundle(_) => "bundle",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: String,
    pub location: Location,
    pub decl: Decl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Refuted,
    Skipped,
    BudgetExceeded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Skipped => "skipped",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Target {
    Adjunction { x: Arc<AffineScheme>, algebras: Vec<TestAlgebra> },
    Triangles { x: Arc<AffineScheme>, y: Option<Arc<AffineScheme>> },
    BaseChange { x: Arc<AffineScheme>, t: Arc<AffineScheme> },
    FiberProduct { f: Arc<Morphism>, g: Arc<Morphism> },
    PreservesClosed(Arc<Morphism>),
    PreservesSmooth(Arc<AffineScheme>),
    PreservesEtale(Arc<AffineScheme>),
    Bundle(Bundle),
    ZeroSection(Bundle),
    Normal { x: Arc<AffineScheme>, equations: Vec<Poly>, algebras: Vec<TestAlgebra> },
    Thom { e: Bundle, algebras: Vec<TestAlgebra> },
    Step2 { e: Bundle, algebras: Vec<TestAlgebra> },
    GysinShadow { x: Arc<AffineScheme>, equations: Vec<Poly>, algebras: Vec<TestAlgebra> },
    GaloisSplit(Arc<AffineScheme>),
    NormOpen { x: Arc<AffineScheme>, g: Poly, algebras: Vec<TestAlgebra> },
    AffineShadow { x: Arc<AffineScheme>, upto: usize },
}

pub const TARGETS: &[&str] = &[
    "adjunction",
    "triangles",
    "base-change",
    "fiber-product",
    "preserves-closed",
    "preserves-smooth",
    "preserves-etale",
    "bundle",
    "zero-section",
    "normal",
    "thom",
    "step2",
    "gysin-shadow",
    "galois-split",
    "norm-open",
    "affine-shadow",
];

#[derive(Clone, Debug)]
pub enum Action {
    Restrict(Arc<AffineScheme>),
    Points { x: Arc<AffineScheme>, algebra: TestAlgebra },
    Verify(Target),
}

#[derive(Clone, Debug)]
pub struct Command {
    /// The statement as written, whitespace collapsed and comments removed.
    pub text: String,
    pub location: Location,
    pub action: Action,
    /// Status the command is expected to end with, when not `verified`.
    pub expect: Option<Status>,
}

/// Declarations in source order together with the commands that use them.
#[derive(Clone, Debug)]
pub struct Session {
    declarations: Vec<Declaration>,
    index: HashMap<String, usize>,
    pub commands: Vec<Command>,
    pub config: Config,
}

impl Session {
    pub fn new(config: Config) -> Self {
        Session {
            declarations: Vec::new(),
            index: HashMap::new(),
            commands: Vec::new(),
            config,
        }
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.declarations
    }

    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.index.get(name).map(|&i| &self.declarations[i])
    }

    /// Adds a declaration; returns it back if the name is taken.
    pub(crate) fn declare(&mut self, d: Declaration) -> Result<(), Declaration> {
        if self.index.contains_key(&d.name) {
            return Err(d);
        }
        self.index.insert(d.name.clone(), self.declarations.len());
        self.declarations.push(d);
        Ok(())
    }

    pub fn scheme(&self, name: &str) -> Option<&Arc<AffineScheme>> {
        match self.get(name).map(|d| &d.decl) {
            Some(Decl::Scheme(x)) => Some(x),
            _ => None,
        }
    }

    pub fn bundle(&self, name: &str) -> Option<&Bundle> {
        match self.get(name).map(|d| &d.decl) {
            Some(Decl::Bundle(e)) => Some(e),
            _ => None,
        }
    }

    /// Declared schemes in source order.
    pub fn schemes(&self) -> impl Iterator<Item = (&str, &Arc<AffineScheme>)> {
        self.declarations.iter().filter_map(|d| match &d.decl {
            Decl::Scheme(x) => Some((d.name.as_str(), x)),
            _ => None,
        })
    }

    pub fn bundles(&self) -> impl Iterator<Item = (&str, &Bundle)> {
        self.declarations.iter().filter_map(|d| match &d.decl {
            Decl::Bundle(e) => Some((d.name.as_str(), e)),
            _ => None,
        })
    }

    pub fn morphisms(&self) -> impl Iterator<Item = (&str, &Arc<Morphism>)> {
        self.declarations.iter().filter_map(|d| match &d.decl {
            Decl::Morphism(m) => Some((d.name.as_str(), m)),
            _ => None,
        })
    }
}
