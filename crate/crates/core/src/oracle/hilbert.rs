//! Hilbert symbols over Q, by the explicit formulas and by exhaustive local search.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::exact::rat::{legendre, prime_factors, squarefree};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Places where `(a, b)_v` can be `-1`: the primes dividing `2ab`, then `∞`.
pub fn relevant_places(a: i64, b: i64) -> Vec<Place> {
    let mut ps: Vec<u64> = prime_factors(2 * a.unsigned_abs() * b.unsigned_abs());
    ps.sort_unstable();
    ps.dedup();
    let mut out: Vec<Place> = ps.into_iter().map(Place::Prime).collect();
    out.push(Place::Infinity);
    out
}

fn split_valuation(n: i64, p: u64) -> (u32, i64) {
    let mut n = n;
    let mut v = 0;
    while n % p as i64 == 0 {
        n /= p as i64;
        v += 1;
    }
    (v, n)
}

fn eps2(u: i64) -> i64 {
    (u.rem_euclid(4) - 1) / 2 % 2
}

fn omega2(u: i64) -> i64 {
    let r = u.rem_euclid(8);
    if r == 3 || r == 5 {
        1
    } else {
        0
    }
}

/// `(a, b)_v ∈ {+1, -1}` for nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match v {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_valuation(a, 2);
            let (be, w) = split_valuation(b, 2);
            let e = eps2(u) * eps2(w) + al as i64 * omega2(w) + be as i64 * omega2(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = split_valuation(a, p);
            let (be, w) = split_valuation(b, p);
            let mut s: i32 = 1;
            if (al * be) % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(u, p);
            }
            if al % 2 == 1 {
                s *= legendre(w, p);
            }
            s as i8
        }
    }
}

/// Places with `(a, b)_v = -1`.
pub fn ramified_places(a: i64, b: i64) -> Vec<Place> {
    relevant_places(a, b)
        .into_iter()
        .filter(|&v| hilbert_symbol(a, b, v) == -1)
        .collect()
}

/// Decides local solvability of `a x² + b y² = z²` over `Q_v` by exhaustive search.
///
/// For a prime `p`, a primitive solution mod `p³` (odd `p`) or mod 32 (`p = 2`) with a
/// unit coordinate lifts by Hensel's lemma, since the squarefree coefficients have
/// valuation at most 1. Scaling the unit coordinate to 1, it suffices to try every
/// value of a second coordinate and look the third up in a table of `c·u²` residues.
pub fn locally_solvable_by_search(a: i64, b: i64, v: Place) -> bool {
    let (a, b) = (squarefree(a), squarefree(b));
    let p = match v {
        Place::Infinity => return a > 0 || b > 0,
        Place::Prime(p) => p,
    };
    let m: i64 = if p == 2 { 32 } else { (p * p * p) as i64 };
    let coef = [a, b, -1];
    let tables: Vec<HashSet<i64>> = coef
        .iter()
        .map(|&c| (0..m).map(|u| (c * u % m * u).rem_euclid(m)).collect())
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            if j == i {
                continue;
            }
            let k = 3 - i - j;
            for xj in 0..m {
                let partial = (coef[i] + coef[j] * xj % m * xj).rem_euclid(m);
                if tables[k].contains(&((-partial).rem_euclid(m))) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(hilbert_symbol(-1, -1, Place::Infinity), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(2)), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Prime(3)), 1);
        assert_eq!(ramified_places(-1, -1), vec![Place::Prime(2), Place::Infinity]);
        assert!(ramified_places(2, -1).is_empty());
    }

    #[test]
    fn search_agrees_on_small_cases() {
        for a in [-3, -2, -1, 1, 2, 3, 5, 6, 7, -7] {
            for b in [-5, -3, -1, 2, 3, 10] {
                for v in relevant_places(a, b) {
                    assert_eq!(
                        hilbert_symbol(a, b, v) == 1,
                        locally_solvable_by_search(a, b, v),
                        "({a},{b})_{v}"
                    );
                }
            }
        }
    }
}
