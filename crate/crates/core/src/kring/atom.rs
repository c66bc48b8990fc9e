use std::cmp::Ordering;
use std::fmt;

use crate::exact::rat::squarefree;

/// A non-polynomial generator of the expression ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `[Spec k(√d)]`, `d` squarefree.
    SpecEtale(i64),
    /// The conic `a x² + b y² = z²`, `a <= b` squarefree.
    Conic(i64, i64),
}

impl Atom {
    pub fn etale(d: i64) -> Atom {
        assert!(d != 0, "etale atom with d = 0");
        Atom::SpecEtale(squarefree(d))
    }

    pub fn conic(a: i64, b: i64) -> Atom {
        assert!(a != 0 && b != 0, "conic atom with a zero coefficient");
        let (a, b) = (squarefree(a), squarefree(b));
        Atom::Conic(a.min(b), a.max(b))
    }

    pub fn render(&self) -> String {
        match self {
            Atom::SpecEtale(d) => format!("SpecQ(sqrt({d}))"),
            Atom::Conic(a, b) => format!("C({a},{b})"),
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.render().cmp(&other.render())
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_atoms() {
        assert_eq!(Atom::conic(-4, -1), Atom::Conic(-1, -1));
        assert_eq!(Atom::conic(3, -12), Atom::Conic(-3, 3));
        assert_eq!(Atom::etale(-8), Atom::SpecEtale(-2));
        assert!(Atom::conic(-1, -1) < Atom::etale(-1));
        assert_eq!(Atom::etale(5).render(), "SpecQ(sqrt(5))");
    }
}
