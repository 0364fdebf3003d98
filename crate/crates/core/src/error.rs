//! Error types shared across the crate.

use serde::Serialize;
use thiserror::Error;

/// A malformed token in one of the text encodings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{token}`: {reason}")]
pub struct ParseError {
    pub token: String,
    pub reason: String,
}

impl ParseError {
    pub fn new(token: impl Into<String>, reason: impl Into<String>) -> Self {
        ParseError {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

/// A broken internal invariant.
///
/// These are never user errors: a violation means either the implementation
/// or the mathematics behind it is wrong for the recorded instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[error("invariant violation [{check}]: {detail}")]
pub struct Violation {
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
}

impl Violation {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            detail: detail.into(),
            instance: None,
        }
    }

    pub fn on(mut self, instance: impl Into<String>) -> Self {
        self.instance = Some(instance.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(usize),
    #[error("field of order {p}^{k} exceeds the supported limit of {limit} elements")]
    TooLarge { p: u32, k: usize, limit: u64 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(usize),
    #[error("element has {got} coordinates, field expects {expected}")]
    MixedContexts { expected: usize, got: usize },
    #[error("coordinate {0} is out of range for the prime field")]
    OutOfRange(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no irreducible modulus found for degree {0}")]
    NoModulus(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("vanishing order of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("division is not exact")]
    NotExact,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("cover order must be at least 2, got {0}")]
    BadOrder(u32),
    #[error("multiplicity {mult} is outside 0 < n_j < {n}")]
    BadMultiplicity { n: u32, mult: u32 },
    #[error("gcd(n, n_1, ..., n_r) = {0}; the cover is not connected")]
    Disconnected(u32),
    #[error("multiplicities sum to {sum}, which is not divisible by {n}")]
    NotBalanced { n: u32, sum: u64 },
    #[error("characteristic {p} divides the cover order {n}")]
    WildRamification { p: u32, n: u32 },
    #[error("{points} branch points but {mults} multiplicities")]
    LengthMismatch { points: usize, mults: usize },
    #[error("branch point {0} appears more than once")]
    DuplicatePoint(String),
    #[error("index {i} outside 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error("field too small: {needed} points needed, even after extending by degree {cap}")]
    FieldTooSmall { needed: usize, cap: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invariant(#[from] Violation),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
