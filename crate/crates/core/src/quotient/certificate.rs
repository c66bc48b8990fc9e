//! Proving `[X] ≠ [Y]` by passing to stable birational classes, where `𝕃` dies,
//! and counting only the classes that have a rational point.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::QuotientError;
use crate::exact::rat::is_square_int;
use crate::kring::{normalize, sb_realize, Atom, KExpr, SBExpr};
use crate::oracle::{conic_rational_point, ArithmeticFacts, ConicStatus, QuaternionSymbol};
use crate::oracle::DEFAULT_CONIC_HEIGHT;

/// Why an atom has no rational point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PointWitness {
    /// A conic with its local obstruction.
    Conic(QuaternionSymbol),
    /// `Spec k(√d)` for a nonsquare `d`.
    Etale { d: i64 },
}

impl fmt::Display for PointWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointWitness::Conic(s) => write!(f, "C({},{}) {}", s.a, s.b, s.render_status()),
            PointWitness::Etale { d } => write!(f, "SpecQ(sqrt({d})): {d} is not a square"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCertificate {
    pub lhs: KExpr,
    pub rhs: KExpr,
    pub phi_lhs: SBExpr,
    pub phi_rhs: SBExpr,
    /// Rational-point degrees of `Φ(lhs)` and `Φ(rhs)`; they differ.
    pub psi_lhs: BigInt,
    pub psi_rhs: BigInt,
    pub witnesses: Vec<PointWitness>,
}

impl InequalityCertificate {
    pub fn render(&self) -> String {
        let mut out = format!(
            "certificate: {} != {}\n  Phi(lhs) = {}\n  Phi(rhs) = {}\n  rational-point degree: {} vs {}",
            self.lhs, self.rhs, self.phi_lhs, self.phi_rhs, self.psi_lhs, self.psi_rhs
        );
        for w in &self.witnesses {
            out.push_str(&format!("\n  no rational point: {w}"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateOutcome {
    /// Equal normal forms: the classes agree.
    Equal,
    Certificate(InequalityCertificate),
    /// The free model cannot separate the classes.
    Unknown { reason: String },
}

fn point_status(a: &Atom) -> Result<(bool, Option<PointWitness>), QuotientError> {
    Ok(match a {
        Atom::SpecEtale(d) => {
            if is_square_int(*d) {
                (true, None)
            } else {
                (false, Some(PointWitness::Etale { d: *d }))
            }
        }
        Atom::Conic(x, y) => {
            let s = conic_rational_point(*x, *y, DEFAULT_CONIC_HEIGHT)?;
            match s.status {
                ConicStatus::Split { .. } => (true, None),
                ConicStatus::NonSplit { .. } => (false, Some(PointWitness::Conic(s))),
                ConicStatus::Undecided => unreachable!("conic_rational_point decides"),
            }
        }
    })
}

/// `Equal`, a certificate that `x ≠ y` in `K₀(Var_Q)`, or `Unknown`.
pub fn inequality_certificate(x: &KExpr, y: &KExpr) -> Result<CertificateOutcome, QuotientError> {
    let (x, _) = normalize(x, &ArithmeticFacts);
    let (y, _) = normalize(y, &ArithmeticFacts);
    if x == y {
        return Ok(CertificateOutcome::Equal);
    }
    if !x.base().is_rational() || !y.base().is_rational() {
        return Ok(CertificateOutcome::Unknown {
            reason: "rational-point witnesses are implemented over Q only".into(),
        });
    }
    let (phi_x, phi_y) = (sb_realize(&x), sb_realize(&y));
    if phi_x == phi_y {
        return Ok(CertificateOutcome::Unknown {
            reason: format!("both classes have Phi = {phi_x}"),
        });
    }
    let mut atoms: Vec<Atom> = x.atoms();
    atoms.extend(y.atoms());
    atoms.sort();
    atoms.dedup();
    let mut statuses = Vec::new();
    for a in &atoms {
        statuses.push((a.clone(), point_status(a)?));
    }
    let has_point = |a: &Atom| statuses.iter().find(|(b, _)| b == a).map(|(_, s)| s.0);
    let psi_x = phi_x.rational_point_degree(has_point).expect("every atom decided");
    let psi_y = phi_y.rational_point_degree(has_point).expect("every atom decided");
    if psi_x == psi_y {
        return Ok(CertificateOutcome::Unknown {
            reason: format!(
                "Phi differs ({phi_x} vs {phi_y}) but both have rational-point degree {psi_x}"
            ),
        });
    }
    let diff = phi_x.sub(&phi_y);
    let mut witnesses = Vec::new();
    for (a, (_, w)) in &statuses {
        let in_diff = diff.terms().any(|(atoms, _)| atoms.contains(a));
        if let (true, Some(w)) = (in_diff, w) {
            witnesses.push(w.clone());
        }
    }
    Ok(CertificateOutcome::Certificate(InequalityCertificate {
        lhs: x,
        rhs: y,
        phi_lhs: phi_x,
        phi_rhs: phi_y,
        psi_lhs: psi_x,
        psi_rhs: psi_y,
        witnesses,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Field;
    use crate::kring::parse_kexpr;
    use crate::oracle::Place;

    #[test]
    fn documented_outcomes() {
        let q = Field::rational();
        let p = |s: &str| parse_kexpr(s, &q).unwrap();
        let ex = p("1 + (L - 1)*C(-1,-1)");
        let CertificateOutcome::Certificate(c) = inequality_certificate(&ex, &p("L^2")).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(c.phi_lhs.render(), "-1*[C(-1,-1)] + 1");
        assert_eq!((c.psi_lhs.clone(), c.psi_rhs.clone()), (BigInt::from(1), BigInt::from(0)));
        assert_eq!(c.witnesses.len(), 1);
        match &c.witnesses[0] {
            PointWitness::Conic(s) => assert_eq!(
                s.status,
                ConicStatus::NonSplit {
                    obstruction: vec![Place::Prime(2), Place::Infinity]
                }
            ),
            w => panic!("unexpected witness {w}"),
        }
        assert_eq!(
            inequality_certificate(&p("L^2"), &p("L^2")).unwrap(),
            CertificateOutcome::Equal
        );
        assert!(matches!(
            inequality_certificate(&ex, &p("1 + (L - 1)*C(-1,-3)")).unwrap(),
            CertificateOutcome::Unknown { .. }
        ));
    }
}
