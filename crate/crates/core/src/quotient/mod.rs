//! Classes `[V/G]` with derivation traces: the eigenspace stratification for split
//! actions, its semilinear variant, the dimension-two and prime-power recursions,
//! the conic descent pipeline, and an inequality certificate through `Z[SB]`.

pub mod certificate;
pub mod descent;
pub mod dim2;
pub mod luroth;
pub mod prime_power;
pub mod routes;
pub mod semilinear;
pub mod split;

pub use certificate::{inequality_certificate, CertificateOutcome, InequalityCertificate};
pub use descent::{descent_conic_quotient, descended_symbol, DescentDatum};
pub use dim2::prop131_class;
pub use luroth::{p1_invariant_generator, LurothGenerator};
pub use prime_power::{cyclic_prime_power_class, galois_triviality_check};
pub use routes::{QuotientProblem, QuotientRoute, RouteRegistry};
pub use semilinear::{semilinear_quotient_class, SemilinearAction};
pub use split::{diagonal_split_class, stratified_sum};

use thiserror::Error;

use crate::exact::ExactError;
use crate::kring::{DerivationTrace, KExpr, KringError};
use crate::oracle::OracleError;
use crate::repgroup::RepError;

/// A class together with the steps that derived it.
pub type Derived = (KExpr, DerivationTrace);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("hypothesis violated: k = {field} must contain all {n}-th roots of 1 (N = exp(G))")]
    RootsOfUnityMissing { n: u64, field: String },
    #[error("hypothesis violated: the image of G has order {order}, not a prime power")]
    NotPrimePower { order: u64 },
    #[error("hypothesis violated: the image of G in GL(V) is not cyclic")]
    NonCyclicImage,
    #[error("hypothesis violated: irreducible factor of dimension {degree} (at most 2 is supported)")]
    UnsupportedDegree { degree: usize },
    #[error("hypothesis violated: dim V = {dim} exceeds 2")]
    DimensionTooLarge { dim: usize },
    #[error("semilinearity violated: {0}")]
    SemilinearityViolated(String),
    #[error("no G-eigenvector found in the eigenspace {0}")]
    EigenvectorNotFound(String),
    #[error("Lüroth generator certification failed: {0}")]
    CertificationFailed(String),
    #[error("M * conj(M) is not scalar")]
    NotInvolutive,
    #[error("sigma^2 = {c} * Id generates an infinite group")]
    InfiniteGroup { c: String },
    #[error("no route applies: {0}")]
    NoRoute(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("derived class {got} differs from the expected {expected}")]
    ContractViolation { got: String, expected: String },
    #[error(transparent)]
    Rep(RepError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Kring(#[from] KringError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<RepError> for QuotientError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::RootsOfUnityMissing { n, field } => {
                QuotientError::RootsOfUnityMissing { n, field }
            }
            RepError::NotPrimePower { order } => QuotientError::NotPrimePower { order },
            RepError::NonCyclicImage => QuotientError::NonCyclicImage,
            RepError::UnsupportedDegree { degree } => QuotientError::UnsupportedDegree { degree },
            RepError::Exact(ExactError::UnsupportedDegree { degree }) => {
                QuotientError::UnsupportedDegree { degree }
            }
            other => QuotientError::Rep(other),
        }
    }
}

impl QuotientError {
    /// Whether the error reports an unmet hypothesis of the chosen procedure.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            QuotientError::RootsOfUnityMissing { .. }
                | QuotientError::NotPrimePower { .. }
                | QuotientError::NonCyclicImage
                | QuotientError::UnsupportedDegree { .. }
                | QuotientError::DimensionTooLarge { .. }
                | QuotientError::SemilinearityViolated(_)
                | QuotientError::NotInvolutive
                | QuotientError::InfiniteGroup { .. }
                | QuotientError::NoRoute(_)
                | QuotientError::Invalid(_)
                | QuotientError::Rep(RepError::Invalid(_))
        )
    }

    /// Anchor naming the hypothesis that failed.
    pub fn anchor(&self) -> &'static str {
        match self {
            QuotientError::RootsOfUnityMissing { .. } => "roots-of-unity-hypothesis",
            QuotientError::NotPrimePower { .. } | QuotientError::NonCyclicImage => {
                "cyclic-prime-power-hypothesis"
            }
            QuotientError::UnsupportedDegree { .. } | QuotientError::DimensionTooLarge { .. } => {
                "dimension-hypothesis"
            }
            QuotientError::SemilinearityViolated(_) => "semilinear-structure",
            QuotientError::NotInvolutive | QuotientError::InfiniteGroup { .. } => "descent-datum",
            QuotientError::EigenvectorNotFound(_) => "split-form-eigenvector",
            QuotientError::CertificationFailed(_) => "projective-quotient-line",
            _ => "input",
        }
    }
}

/// Fails unless `x` is exactly `𝕃^n`.
pub(crate) fn expect_lefschetz_power(x: &KExpr, n: usize) -> Result<(), QuotientError> {
    if x.is_lefschetz_power(n as u32) {
        Ok(())
    } else {
        Err(QuotientError::ContractViolation {
            got: x.render(),
            expected: KExpr::lefschetz_power(x.base(), n as u32).render(),
        })
    }
}
