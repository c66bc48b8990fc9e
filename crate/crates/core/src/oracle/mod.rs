//! Independent referees: Hilbert symbols and conics over Q, the quaternary
//! fixed-point form of a descent datum, and exhaustive finite-field counts.

pub mod conic;
pub mod counters;
pub mod ff;
pub mod hilbert;
pub mod invariants;
pub mod quaternary;
pub mod reduce;
pub mod report;
pub mod twisted;

pub use conic::{
    conic_rational_point, conic_splits_over, search_conic_point, ArithmeticFacts, ConicStatus,
    QuaternionSymbol, DEFAULT_CONIC_HEIGHT,
};
pub use counters::{CountTarget, CounterRegistry, PointCounter};
pub use ff::{FpMatrix, GF};
pub use hilbert::{hilbert_symbol, locally_solvable_by_search, ramified_places, Place};
pub use invariants::{count_affine_points, invariant_presentation, Binomial, InvariantPresentation};
pub use quaternary::{
    quaternary_fixed_point_test, Obstruction, QuaternaryForm, QuaternaryVerdict,
    DEFAULT_QUATERNARY_BUDGET, DEFAULT_QUATERNARY_HEIGHT,
};
pub use reduce::Reduction;
pub use report::{CountMethod, CountReport};
pub use twisted::{
    semilinear_orbit_count, twisted_orbit_count, twisted_orbit_count_exhaustive, SemilinearElement,
    Stratum, DEFAULT_ENUMERATION_BUDGET,
};

use thiserror::Error;

use crate::exact::ExactError;
use crate::kring::KringError;
use crate::repgroup::RepError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search exhausted: no {what} within bound {bound}")]
    SearchExhausted { what: String, bound: u64 },
    #[error("{what} needs {size} evaluations, over the budget of {budget}")]
    TooLarge { what: String, size: u128, budget: u128 },
    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Kring(#[from] KringError),
}
