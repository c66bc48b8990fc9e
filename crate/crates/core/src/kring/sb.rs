use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::atom::Atom;
use super::expr::KExpr;

/// Element of the free abelian group on stable birational classes, as the image of
/// the map killing `𝕃`. The empty atom list is the class of a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SBExpr {
    terms: BTreeMap<Vec<Atom>, BigInt>,
}

impl SBExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Atom>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, atoms: &[Atom]) -> BigInt {
        self.terms.get(atoms).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, atoms: Vec<Atom>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(atoms.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&atoms);
        }
    }

    pub fn add(&self, o: &SBExpr) -> SBExpr {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &SBExpr) -> SBExpr {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &SBExpr) -> SBExpr {
        let mut out = SBExpr::zero();
        for (a1, c1) in &self.terms {
            for (a2, c2) in &o.terms {
                let mut atoms = a1.clone();
                atoms.extend(a2.iter().cloned());
                atoms.sort();
                out.add_term(atoms, c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree map counting only classes with a rational point: `ψ(class) = 1` when
    /// every atom of the monomial has one, else 0. `has_point` answers per atom.
    pub fn rational_point_degree(
        &self,
        has_point: impl Fn(&Atom) -> Option<bool>,
    ) -> Option<BigInt> {
        let mut total = BigInt::zero();
        for (atoms, c) in &self.terms {
            let mut all = true;
            for a in atoms {
                match has_point(a) {
                    Some(true) => {}
                    Some(false) => all = false,
                    None => return None,
                }
            }
            if all {
                total += c;
            }
        }
        Some(total)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (atoms, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            if atoms.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                let a: Vec<String> = atoms.iter().map(|a| format!("[{}]", a.render())).collect();
                out.push_str(&format!("{abs}*{}", a.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for SBExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// The ring map `𝕃 ↦ 0`, atoms to their own stable birational classes.
pub fn sb_realize(x: &KExpr) -> SBExpr {
    let mut out = SBExpr::zero();
    for (m, c) in x.terms() {
        if m.lpow == 0 {
            out.add_term(m.atoms.clone(), c.clone());
        }
    }
    out
}
