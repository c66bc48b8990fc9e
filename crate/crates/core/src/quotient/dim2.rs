//! `[V/G] = 𝕃^{dim V}` for `dim V <= 2` and any finite abelian `G`:
//! `V = {0} ⊔ V^×` and `V^×/G → P(V)/G ≅ P^{dim V - 1}` is a `G_m`-bundle.

use super::luroth::p1_invariant_generator;
use super::{expect_lefschetz_power, Derived, QuotientError};
use crate::kring::{DerivationTrace, KExpr, StandardClass};
use crate::repgroup::GroupAction;

pub fn prop131_class(a: &GroupAction) -> Result<Derived, QuotientError> {
    let k = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok((KExpr::one(k), DerivationTrace::new()));
    }
    if n > 2 {
        return Err(QuotientError::DimensionTooLarge { dim: n });
    }
    let zero = KExpr::zero(k);
    let one = KExpr::one(k);
    let mut trace = DerivationTrace::new();
    trace.advance(
        "[V/G] = [0/G] + [V^x/G], the origin is fixed",
        "origin-stratum",
        &zero,
        one.clone(),
    );
    let line = if n == 2 {
        let f = p1_invariant_generator(a)?;
        trace.advance(
            &format!(
                "P(V)/G = P^1 via f = {} of degree {} = |image in PGL_2|, rational point f({}) = {}",
                f, f.degree, f.t0, f.point
            ),
            "projective-quotient-line",
            &zero,
            one.clone(),
        );
        KExpr::standard(k, StandardClass::Projective(1))
    } else {
        trace.advance(
            "P(V)/G is a point",
            "projective-quotient-line",
            &zero,
            one.clone(),
        );
        one.clone()
    };
    let class = &one + &(&KExpr::standard(k, StandardClass::Gm) * &line);
    trace.advance(
        "[V^x/G] = (L - 1)*[P(V)/G], G_m-bundle over the quotient line",
        "punctured-fibration",
        &zero,
        class.clone(),
    );
    expect_lefschetz_power(&class, n)?;
    Ok((class, trace))
}
