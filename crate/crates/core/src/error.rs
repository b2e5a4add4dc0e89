use std::fmt;

use thiserror::Error;

use crate::set::ElementSet;

/// The three partial-order axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderAxiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
}

impl fmt::Display for OrderAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderAxiom::Reflexivity => "reflexivity",
            OrderAxiom::Antisymmetry => "antisymmetry",
            OrderAxiom::Transitivity => "transitivity",
        })
    }
}

/// Auxiliary-relation axioms, numbered as usual:
/// 1. `x ≺ y` implies `x ≤ y`;
/// 2. `u ≤ x ≺ y ≤ z` implies `u ≺ z`;
/// 3. a least element, if present, is related to everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxAxiom {
    BelowOrder = 1,
    Saturation = 2,
    Bottom = 3,
}

impl fmt::Display for AuxAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order axiom violated ({axiom}) at pair ({}, {})", .witness.0, .witness.1)]
    OrderAxiom {
        axiom: OrderAxiom,
        witness: (usize, usize),
    },
    #[error("auxiliary-relation axiom {axiom} violated at pair ({}, {})", .witness.0, .witness.1)]
    AuxAxiom {
        axiom: AuxAxiom,
        witness: (usize, usize),
    },
    #[error("index {index} out of range for a universe of {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("universe of {n} elements exceeds the cap of {cap}")]
    UniverseTooLarge { n: usize, cap: usize },
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("seed pair ({}, {}) is not in the order", .0.0, .0.1)]
    SeedViolatesOrder((usize, usize)),
    #[error("relations live on different posets")]
    PosetMismatch,
    #[error("set {{{0}}} is not a lower set")]
    NotLower(ElementSet),
    #[error("set {{{0}}} is not an upper set")]
    NotUpper(ElementSet),
    #[error("relation is not pre-approximating: section below {0} is not directed")]
    NotPreApproximating(usize),
    #[error("relation is not approximating at element {0}")]
    NotApproximating(usize),
    #[error("family topology violates an invariant: {0}")]
    NotATopology(String),
    #[error("element {element} does not belong to family {family}")]
    ForeignElement { element: String, family: String },
    #[error("unknown distinguished set {0:?}")]
    UnknownSet(String),
    #[error("{0} is not analysed for family {1}")]
    Unsupported(String, String),
    #[error("window of {size} elements exceeds the cap of {cap}")]
    WindowTooLarge { size: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }
}
