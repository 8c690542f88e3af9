use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus is not monic (leading coefficient {leading})")]
    NotMonic { leading: String },

    #[error("modulus {modulus} is not separable: gcd(f, f') = {gcd}")]
    NotSeparable { modulus: String, gcd: String },

    /// `gcd` is a nontrivial common factor of the element and the modulus,
    /// `cofactor` is the complementary factor of the modulus.
    #[error("{element} is not invertible (common factor {gcd}, modulus cofactor {cofactor})")]
    NotInvertible {
        element: String,
        gcd: String,
        cofactor: String,
    },

    #[error("extension is not Galois: found {found} roots of the modulus, degree is {degree}")]
    NotGalois { found: usize, degree: usize },

    #[error("rational root search exhausted at height bound {bound}")]
    SearchExhausted { bound: u64 },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("S-polynomial of degree {degree} exceeds the configured cap {cap}")]
    DegreeBudgetExceeded { degree: u32, cap: u32 },

    #[error("morphism not well defined: generator #{index} ({generator}) pulls back to {residue}, not 0")]
    NotWellDefined {
        index: usize,
        generator: String,
        residue: String,
    },

    #[error("arity mismatch: target has {expected} coordinates, {found} images supplied")]
    ArityMismatch { expected: usize, found: usize },

    #[error("scheme has no relative presentation")]
    NoRelativePresentation,

    #[error("unsupported base change: {0}")]
    UnsupportedBaseChange(String),

    #[error("matrix is not idempotent: entry ({row}, {col}) of P^2 - P reduces to {residue}")]
    NotIdempotent {
        row: usize,
        col: usize,
        residue: String,
    },

    #[error("rank mismatch at point {point:?}: expected {expected}, found {found}")]
    RankMismatch {
        point: Vec<String>,
        expected: usize,
        found: usize,
    },

    #[error("not a complete intersection: {0}")]
    NotCompleteIntersection(String),

    #[error("point enumeration budget {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("test algebra is not local")]
    NotLocalAlgebra,

    #[error("tensor product with the etale algebra is not local")]
    NonLocalTensor,

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// True for the errors that signal a desk-scale resource limit rather than a
    /// mathematical answer.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::DegreeBudgetExceeded { .. }
                | Error::SearchExhausted { .. }
        )
    }
}
