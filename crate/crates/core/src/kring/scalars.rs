//! Base change along `Q ⊂ K = Q(√e)` and the pushforward of pulled-back classes.

use super::atom::Atom;
use super::expr::KExpr;
use super::normalize::SolvabilityFacts;
use super::KringError;
use crate::exact::rat::squarefree;
use crate::exact::Field;

/// A class over `K`, remembering its preimage over Q when it was pulled back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarExtension {
    pub expr: KExpr,
    pub preimage: Option<KExpr>,
    pub e: i64,
}

impl ScalarExtension {
    /// Product of two extensions along the same `K`.
    pub fn mul(&self, o: &ScalarExtension) -> Result<ScalarExtension, KringError> {
        if self.e != o.e {
            return Err(KringError::MixedBaseField(
                format!("Q(sqrt({}))", self.e),
                format!("Q(sqrt({}))", o.e),
            ));
        }
        let preimage = match (&self.preimage, &o.preimage) {
            (Some(a), Some(b)) => Some(a.checked_mul(b)?),
            _ => None,
        };
        Ok(ScalarExtension {
            expr: self.expr.checked_mul(&o.expr)?,
            preimage,
            e: self.e,
        })
    }

    /// An extension with no retained preimage.
    pub fn forget_preimage(&self) -> ScalarExtension {
        ScalarExtension {
            preimage: None,
            ..self.clone()
        }
    }
}

/// Pulls a class over Q back to `K = Q(√e)`.
pub fn extend_scalars(
    x: &KExpr,
    e: i64,
    facts: &dyn SolvabilityFacts,
) -> Result<ScalarExtension, KringError> {
    if !x.base().is_rational() {
        return Err(KringError::NotRationalBase(x.base().name()));
    }
    let k = Field::quadratic(e).map_err(|err| KringError::NotRationalBase(err.to_string()))?;
    let e = squarefree(e);
    let mut out = x.rebase(&k);
    for atom in x.atoms() {
        let by = match atom {
            Atom::SpecEtale(d) if d == 1 || d == e => Some(KExpr::int(&k, 2)),
            Atom::SpecEtale(_) => None,
            Atom::Conic(a, b) => match facts.conic_splits(&k, a, b) {
                Some(true) => Some(KExpr::lpoly(&k, &[1, 1])),
                _ => None,
            },
        };
        if let Some(by) = by {
            out = out.substitute_atom(&atom, &by);
        }
    }
    Ok(ScalarExtension {
        expr: out,
        preimage: Some(x.clone()),
        e,
    })
}

/// Pushforward to Q of a pulled-back class: `ι_*(ι^* x) = x · [Spec K]`.
pub fn restrict_scalars(x: &ScalarExtension) -> Result<KExpr, KringError> {
    let pre = x.preimage.as_ref().ok_or(KringError::NotPulledBack)?;
    Ok(pre * &KExpr::atom(pre.base(), Atom::etale(x.e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::normalize::FieldSquareFacts;
    use crate::kring::text::parse_kexpr;

    #[test]
    fn extension_and_projection_formula() {
        let q = Field::rational();
        let p = |s: &str| parse_kexpr(s, &q).unwrap();
        let ext = extend_scalars(&p("SpecQ(sqrt(-1))"), -1, &FieldSquareFacts).unwrap();
        assert_eq!(ext.expr.render(), "2");
        let l = extend_scalars(&p("L"), -1, &FieldSquareFacts).unwrap();
        assert_eq!(l.expr.render(), "1*L");
        assert_eq!(restrict_scalars(&l).unwrap().render(), "1*L*SpecQ(sqrt(-1))");
        let one = extend_scalars(&p("1"), 5, &FieldSquareFacts).unwrap();
        assert_eq!(restrict_scalars(&one).unwrap().render(), "1*SpecQ(sqrt(5))");
        assert_eq!(
            restrict_scalars(&l.forget_preimage()),
            Err(KringError::NotPulledBack)
        );
    }
}
