//! Exact-arithmetic toolkit for finite quasi-metric spaces and preorders
//! treated as categories enriched in a quantale: validation, modules
//! (presheaves and copresheaves), a filter calculus, flatness
//! classification, and completions with machine-checked universal
//! properties.
//!
//! Everything is computed over exact rationals (or Booleans), so the
//! identities behind each construction are tested as equalities, never up
//! to a tolerance.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub mod completion;
pub mod doc;
pub mod filter;
pub mod flatness;
pub mod generate;
pub mod module;
pub mod preorder;
pub mod quantale;
pub mod space;
pub mod suite;

pub use completion::CompletionKind;
pub use quantale::{Base, CostValue, ParseValueError, Value};
pub use space::Space;

/// An infinite regular cardinal tag.
///
/// All infinite regular cardinals coincide on finite instances: a single
/// witness inside a finite core settles the family condition for every
/// size bound at once. The tag is carried for interface fidelity and has
/// no computational effect. `Aleph(0)` is the countable cardinal, written
/// `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Aleph(pub u32);

impl Aleph {
    pub const OMEGA: Aleph = Aleph(0);
}

impl fmt::Display for Aleph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "omega")
        } else {
            write!(f, "aleph_{}", self.0)
        }
    }
}

impl FromStr for Aleph {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "omega" || s == "aleph_0" {
            return Ok(Aleph::OMEGA);
        }
        if let Some(k) = s.strip_prefix("aleph_") {
            if let Ok(n) = k.parse::<u32>() {
                return Ok(Aleph(n));
            }
        }
        Err(format!(
            "invalid cardinal tag `{s}`: expected `omega` or `aleph_<k>`"
        ))
    }
}

/// Errors shared by the whole toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("hom matrix must be square of size {expected}, found a row of length {got}")]
    MatrixShape { expected: usize, got: usize },
    #[error("expected a value of base {expected}, got {got}")]
    BaseMismatch {
        expected: quantale::Base,
        got: quantale::Base,
    },
    #[error("operation requires a {0}-based space")]
    ExpectedBase(quantale::Base),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("object index {index} out of range ({count} objects)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("functor endpoints do not match the operation's spaces")]
    FunctorMismatch,
    #[error("invalid enriched category:\n{0}")]
    InvalidSpace(space::CategoryReport),
    #[error("invalid module:\n{0}")]
    InvalidModule(module::ModuleReport),
    #[error("invalid functor:\n{0}")]
    InvalidFunctor(space::FunctorReport),
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("filter core must be non-empty")]
    EmptyCore,
    #[error("cycle must be non-empty")]
    EmptyCycle,
    #[error("set is not downward closed: contains `{member}` but not `{missing}` below it")]
    NotDownClosed { member: String, missing: String },
    #[error("target space is not complete for kind `{0}`")]
    TargetNotComplete(completion::CompletionKind),
    #[error("space with {count} objects exceeds the enumeration limit of {limit}")]
    TooManyObjects { count: usize, limit: usize },
    #[error("invalid document: {0}")]
    Document(String),
    #[error(transparent)]
    Value(#[from] quantale::ParseValueError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
