//! Conics `a x² + b y² = z²` over Q and over the supported number fields.

use serde::Serialize;

use super::hilbert::{hilbert_symbol, ramified_places, Place};
use super::OracleError;
use crate::exact::rat::{isqrt, squarefree};
use crate::exact::{CyclotomicEmbedding, Field};
use crate::kring::SolvabilityFacts;

pub const DEFAULT_CONIC_HEIGHT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConicStatus {
    /// A verified nontrivial point `(x, y, z)`.
    Split { point: (i64, i64, i64) },
    /// Places where the Hilbert symbol is `-1`.
    NonSplit { obstruction: Vec<Place> },
    Undecided,
}

/// The pair `(a, b)` with its splitting status over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternionSymbol {
    pub a: i64,
    pub b: i64,
    pub status: ConicStatus,
}

impl QuaternionSymbol {
    pub fn undecided(a: i64, b: i64) -> Self {
        QuaternionSymbol {
            a: squarefree(a),
            b: squarefree(b),
            status: ConicStatus::Undecided,
        }
    }

    pub fn is_split(&self) -> Option<bool> {
        match self.status {
            ConicStatus::Split { .. } => Some(true),
            ConicStatus::NonSplit { .. } => Some(false),
            ConicStatus::Undecided => None,
        }
    }

    /// Re-checks the stored status from scratch.
    pub fn verify(&self) -> bool {
        match &self.status {
            ConicStatus::Split { point: (x, y, z) } => {
                let (x, y, z) = (*x as i128, *y as i128, *z as i128);
                (x, y, z) != (0, 0, 0)
                    && self.a as i128 * x * x + self.b as i128 * y * y == z * z
            }
            ConicStatus::NonSplit { obstruction } => {
                !obstruction.is_empty()
                    && obstruction
                        .iter()
                        .all(|&v| hilbert_symbol(self.a, self.b, v) == -1)
            }
            ConicStatus::Undecided => true,
        }
    }

    /// `ramified at: 2, inf` style rendering of the obstruction.
    pub fn render_status(&self) -> String {
        match &self.status {
            ConicStatus::Split { point } => {
                format!("split, point ({}, {}, {})", point.0, point.1, point.2)
            }
            ConicStatus::NonSplit { obstruction } => {
                let ps: Vec<String> = obstruction.iter().map(|p| p.to_string()).collect();
                format!("non-split, ramified at: {}", ps.join(", "))
            }
            ConicStatus::Undecided => "undecided".into(),
        }
    }
}

/// First point of `a x² + b y² = z²` with `max(x, y) <= height`, scanning shells
/// `h = 1, 2, …` in the order `(0..=h, h)` then `(h, 0..h)`.
pub fn search_conic_point(a: i64, b: i64, height: u64) -> Option<(i64, i64, i64)> {
    let (a, b) = (a as i128, b as i128);
    let test = |x: i64, y: i64| -> Option<(i64, i64, i64)> {
        let v = a * (x as i128) * (x as i128) + b * (y as i128) * (y as i128);
        if v < 0 {
            return None;
        }
        let r = isqrt_i128(v);
        (r * r == v).then_some((x, y, r as i64))
    };
    for h in 1..=height as i64 {
        for x in 0..=h {
            if let Some(p) = test(x, h) {
                return Some(p);
            }
        }
        for y in 0..h {
            if let Some(p) = test(h, y) {
                return Some(p);
            }
        }
    }
    None
}

fn isqrt_i128(v: i128) -> i128 {
    if v < (1i128 << 62) {
        return isqrt(v as u64) as i128;
    }
    let mut x = (v as f64).sqrt() as i128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}

/// Decides the conic over Q: non-split with its obstruction, or split with a found point.
pub fn conic_rational_point(a: i64, b: i64, height: u64) -> Result<QuaternionSymbol, OracleError> {
    if a == 0 || b == 0 {
        return Err(OracleError::Invalid("conic coefficients must be nonzero".into()));
    }
    let (a, b) = (squarefree(a), squarefree(b));
    let obstruction = ramified_places(a, b);
    if !obstruction.is_empty() {
        return Ok(QuaternionSymbol {
            a,
            b,
            status: ConicStatus::NonSplit { obstruction },
        });
    }
    match search_conic_point(a, b, height) {
        Some(point) => Ok(QuaternionSymbol {
            a,
            b,
            status: ConicStatus::Split { point },
        }),
        None => Err(OracleError::SearchExhausted {
            what: format!("point on {a}x^2 + {b}y^2 = z^2"),
            bound: height,
        }),
    }
}

/// Whether the conic splits over `k`: every Q-place where `(a, b)_v = -1` must have
/// even local degree in `k`.
pub fn conic_splits_over(k: &Field, a: i64, b: i64) -> Result<bool, OracleError> {
    let places = ramified_places(a, b);
    if places.is_empty() || k.is_rational() {
        return Ok(places.is_empty());
    }
    let emb = CyclotomicEmbedding::of(k)?;
    Ok(places.into_iter().all(|v| {
        let p = match v {
            Place::Prime(p) => Some(p),
            Place::Infinity => None,
        };
        emb.local_degree(p) % 2 == 0
    }))
}

/// Hilbert symbols for conics and Galois data for squares.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArithmeticFacts;

impl SolvabilityFacts for ArithmeticFacts {
    fn conic_splits(&self, base: &Field, a: i64, b: i64) -> Option<bool> {
        conic_splits_over(base, a, b).ok()
    }

    fn is_square(&self, base: &Field, d: i64) -> Option<bool> {
        base.contains_sqrt(d).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_conics() {
        let s = conic_rational_point(-1, -1, 100).unwrap();
        assert_eq!(
            s.status,
            ConicStatus::NonSplit {
                obstruction: vec![Place::Prime(2), Place::Infinity]
            }
        );
        assert_eq!(s.render_status(), "non-split, ramified at: 2, inf");
        assert_eq!(
            conic_rational_point(-1, 1, 100).unwrap().status,
            ConicStatus::Split { point: (0, 1, 1) }
        );
        assert_eq!(
            conic_rational_point(2, -1, 100).unwrap().status,
            ConicStatus::Split { point: (1, 1, 1) }
        );
        assert!(s.verify());
    }

    #[test]
    fn splitting_over_extensions() {
        let gauss = Field::quadratic(-1).unwrap();
        assert!(conic_splits_over(&gauss, -1, -1).unwrap());
        let k = Field::quadratic(2).unwrap();
        assert!(!conic_splits_over(&k, -1, -1).unwrap());
        assert!(conic_splits_over(&Field::cyclotomic(3).unwrap(), -1, -1).unwrap());
    }
}
