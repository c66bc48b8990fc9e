//! A computable model of part of the Grothendieck ring of varieties: polynomials
//! in `𝕃` over a free commutative monoid of étale-algebra and conic atoms.
//!
//! Equal normal forms certify equal classes. Unequal normal forms certify
//! nothing by themselves; see `quotient::certificate` for the one implemented
//! inequality witness.

pub mod atom;
pub mod expr;
pub mod normalize;
pub mod sb;
pub mod scalars;
pub mod specialize;
pub mod text;
pub mod trace;

pub use atom::Atom;
pub use expr::{KExpr, Monomial, StandardClass};
pub use normalize::{has_undecided, normalize, FieldSquareFacts, SolvabilityFacts};
pub use sb::{sb_realize, SBExpr};
pub use scalars::{extend_scalars, restrict_scalars, ScalarExtension};
pub use specialize::{specialize_count, SpecializationContext};
pub use text::parse_kexpr;
pub use trace::{DerivationTrace, TraceStep};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KringError {
    #[error("expressions over different base fields: {0} and {1}")]
    MixedBaseField(String, String),
    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("class has no retained preimage over the base")]
    NotPulledBack,
    #[error("expected an expression over Q, got {0}")]
    NotRationalBase(String),
    #[error("expression syntax error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}
