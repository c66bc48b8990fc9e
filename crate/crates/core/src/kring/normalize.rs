use super::atom::Atom;
use super::expr::KExpr;
use super::trace::DerivationTrace;
use crate::exact::Field;

/// Source of truth for whether atoms are split over a base field.
/// Answers must be pure; `None` means undecided.
pub trait SolvabilityFacts {
    /// Whether `a x² + b y² = z²` has a nontrivial point over `base`.
    fn conic_splits(&self, base: &Field, a: i64, b: i64) -> Option<bool>;
    /// Whether `d` is a square in `base`.
    fn is_square(&self, base: &Field, d: i64) -> Option<bool>;
}

/// Decides squares exactly and conics only when a coefficient combination is a square.
#[derive(Clone, Copy, Debug, Default)]
pub struct FieldSquareFacts;

impl SolvabilityFacts for FieldSquareFacts {
    fn conic_splits(&self, base: &Field, a: i64, b: i64) -> Option<bool> {
        let sq = |d: i64| base.contains_sqrt(d).unwrap_or(false);
        if sq(a) || sq(b) || sq(-a * b) {
            Some(true)
        } else {
            None
        }
    }

    fn is_square(&self, base: &Field, d: i64) -> Option<bool> {
        base.contains_sqrt(d).ok()
    }
}

/// Rewrites split atoms away: split conics become `1 + 𝕃`, étale algebras of a
/// square become `2`. Undecided atoms stay and are flagged in the trace.
pub fn normalize(x: &KExpr, facts: &dyn SolvabilityFacts) -> (KExpr, DerivationTrace) {
    let mut trace = DerivationTrace::new();
    let mut cur = x.clone();
    let base = x.base().clone();
    let mut flagged = std::collections::HashSet::new();
    loop {
        let mut changed = false;
        for atom in cur.atoms() {
            let replacement = match &atom {
                Atom::SpecEtale(d) => match facts.is_square(&base, *d) {
                    Some(true) => Some((KExpr::int(&base, 2), "split-etale")),
                    _ => None,
                },
                Atom::Conic(a, b) => match facts.conic_splits(&base, *a, *b) {
                    Some(true) => Some((KExpr::lpoly(&base, &[1, 1]), "split-conic")),
                    Some(false) => None,
                    None => {
                        if flagged.insert(atom.clone()) {
                            trace.advance(
                                &format!("keep {}", atom.render()),
                                "undecided-conic",
                                &cur,
                                cur.clone(),
                            );
                        }
                        None
                    }
                },
            };
            if let Some((by, anchor)) = replacement {
                let next = cur.substitute_atom(&atom, &by);
                trace.advance(&format!("rewrite {}", atom.render()), anchor, &cur, next.clone());
                cur = next;
                changed = true;
            }
        }
        if !changed {
            return (cur, trace);
        }
    }
}

/// Whether the normalization left any undecided atom.
pub fn has_undecided(trace: &DerivationTrace) -> bool {
    trace.anchors().contains(&"undecided-conic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::text::parse_kexpr;

    #[test]
    fn split_atoms_rewrite() {
        let q = Field::rational();
        let x = parse_kexpr("(L - 1)*C(-1,1)", &q).unwrap();
        let (y, t) = normalize(&x, &FieldSquareFacts);
        assert_eq!(y.render(), "1*L^2 - 1");
        assert!(t.is_chained());
        let (z, _) = normalize(&parse_kexpr("SpecQ(sqrt(4))", &q).unwrap(), &FieldSquareFacts);
        assert_eq!(z.render(), "2");
    }

    #[test]
    fn unknown_conic_is_flagged() {
        let q = Field::rational();
        let x = parse_kexpr("(L - 1)*C(-1,-1)", &q).unwrap();
        let (y, t) = normalize(&x, &FieldSquareFacts);
        assert_eq!(y, x);
        assert!(has_undecided(&t));
    }
}
