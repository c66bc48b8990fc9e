//! Exact arithmetic: rationals, polynomials, the supported number fields,
//! matrices over them, and factoring of divisors of `T^N - 1`.

pub mod embed;
pub mod factor;
pub mod field;
pub mod fpoly;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rat;

pub use embed::CyclotomicEmbedding;
pub use factor::{contains_nth_roots, factor_unity_poly, minimal_polynomial, DEFAULT_ORDER_BOUND};
pub use field::{Field, FieldElem, FieldKind};
pub use fpoly::FieldPoly;
pub use matrix::Matrix;
pub use parse::parse_elem;
pub use poly::{cyclotomic_poly, poly_gcd, UniPoly};
pub use rat::Rat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("field element syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("no N <= {bound} with p | T^N - 1")]
    OrderBoundExceeded { bound: u64 },
    #[error("irreducible factor of degree {degree} over k (only degrees 1 and 2 are supported)")]
    UnsupportedDegree { degree: usize },
    #[error("matrix has no finite order <= {bound}")]
    NotFiniteOrder { bound: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mixed fields: {0} and {1}")]
    MixedFields(String, String),
}
