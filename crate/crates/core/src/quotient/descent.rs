//! `A²_K` with `σ(v) = M·v̄` over `K = Q(√d)`: its quotient is a twisted conic bundle.

use num_traits::{One, ToPrimitive};

use super::semilinear::SemilinearAction;
use super::{Derived, QuotientError};
use crate::exact::rat::{render_rat, squarefree, Rat};
use crate::exact::{parse_elem, Field, FieldElem, Matrix};
use crate::kring::{normalize, Atom, DerivationTrace, KExpr};
use crate::oracle::{ArithmeticFacts, SemilinearElement};
use crate::repgroup::AbelianGroup;

/// `d`, `M ∈ GL_2(Q(√d))` and `c ∈ Q^×` with `M·M̄ = c·Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDatum {
    d: i64,
    field: Field,
    m: Matrix,
    c: Rat,
}

impl DescentDatum {
    pub fn new(d: i64, m: Matrix) -> Result<DescentDatum, QuotientError> {
        if d == 0 || squarefree(d) != d || d == 1 {
            return Err(QuotientError::Invalid(format!(
                "d = {d} must be squarefree and not 0 or 1"
            )));
        }
        let field = Field::quadratic(d)?;
        if m.field() != &field || m.rows() != 2 || m.cols() != 2 {
            return Err(QuotientError::Invalid(format!(
                "M must be a 2x2 matrix over {}",
                field.name()
            )));
        }
        if m.det().is_zero() {
            return Err(QuotientError::Invalid("M is singular".into()));
        }
        let mm = m.mul(&m.conj().expect("quadratic field"));
        let c = mm
            .as_scalar()
            .and_then(|s| s.as_rational())
            .ok_or(QuotientError::NotInvolutive)?;
        Ok(DescentDatum { d, field, m, c })
    }

    /// Parses the entries of `M` in the generator `z = √d`.
    pub fn from_entries(d: i64, rows: &[[&str; 2]; 2]) -> Result<DescentDatum, QuotientError> {
        let field = Field::quadratic(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_elem(s, &field)).collect())
            .collect::<Result<Vec<Vec<FieldElem>>, _>>()?;
        Self::new(d, Matrix::from_rows(&field, rows)?)
    }

    /// `d = -1`, `M = [[0, 1], [-1, 0]]`: `σ` of order 4 with `σ² = -Id`.
    pub fn gaussian_quarter_turn() -> DescentDatum {
        Self::from_entries(-1, &[["0", "1"], ["-1", "0"]]).expect("valid datum")
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    /// Order of `⟨σ⟩`: 2 for `c = 1`, 4 for `c = -1`, infinite otherwise.
    pub fn group_order(&self) -> Option<u64> {
        if self.c.is_one() {
            Some(2)
        } else if (-&self.c).is_one() {
            Some(4)
        } else {
            None
        }
    }

    /// The datum for `λ·M`, with `c` multiplied by the norm of `λ`.
    pub fn scaled(&self, lambda: &FieldElem) -> Result<DescentDatum, QuotientError> {
        Self::new(self.d, self.m.scale(lambda))
    }

    /// Every element `σ^j` as `v ↦ M_j·γ^j(v)`.
    pub fn semilinear_elements(&self) -> Result<Vec<SemilinearElement>, QuotientError> {
        let n = self.group_order().ok_or_else(|| QuotientError::InfiniteGroup {
            c: render_rat(&self.c),
        })?;
        let mut out = vec![SemilinearElement {
            conj: false,
            matrix: Matrix::identity(&self.field, 2),
        }];
        for j in 1..n as usize {
            let prev = &out[j - 1];
            // σ ∘ (M_prev γ_prev) = M · conj(M_prev) · γ^(j)
            let matrix = self.m.mul(&prev.matrix.conj().expect("quadratic field"));
            out.push(SemilinearElement {
                conj: j % 2 == 1,
                matrix,
            });
        }
        Ok(out)
    }

    /// The same group as a semilinear action of `Z/n` on `K²` over `k = Q`.
    pub fn semilinear_action(&self) -> Result<SemilinearAction, QuotientError> {
        let n = self.group_order().ok_or_else(|| QuotientError::InfiniteGroup {
            c: render_rat(&self.c),
        })?;
        SemilinearAction::new(
            &Field::rational(),
            Some(self.d),
            AbelianGroup::new(vec![n])?,
            vec![true],
            vec![self.m.clone()],
        )
    }
}

/// The quaternion symbol of `P¹_K/⟨σ̄⟩`: `(d, c)` with `c` reduced to a squarefree integer.
pub fn descended_symbol(dd: &DescentDatum) -> (i64, i64) {
    let c = dd.c();
    let num = c.numer().to_i64().expect("small numerator");
    let den = c.denom().to_i64().expect("small denominator");
    (dd.d(), squarefree(num * den))
}

/// `[V/G] = [pt] + [𝕃 - 1]·[P¹_K/G]`, with `P¹_K/G` the conic of symbol `(d, c)`.
pub fn descent_conic_quotient(dd: &DescentDatum) -> Result<Derived, QuotientError> {
    if dd.group_order().is_none() {
        return Err(QuotientError::InfiniteGroup {
            c: render_rat(dd.c()),
        });
    }
    let q = Field::rational();
    let (a, b) = descended_symbol(dd);
    let mut trace = DerivationTrace::new();
    let zero = KExpr::zero(&q);
    let one = KExpr::one(&q);
    trace.advance(
        "[V/G] = [0/G] + [V^x/G], origin is a fixed point",
        "origin-stratum",
        &zero,
        one.clone(),
    );
    let conic = KExpr::atom(&q, Atom::conic(a, b));
    let class = &one + &(&KExpr::lpoly(&q, &[-1, 1]) * &conic);
    trace.advance(
        "[V^x/G] = (L - 1)*[P^1_K/G], G_m-bundle over the quotient line",
        "punctured-fibration",
        &zero,
        class.clone(),
    );
    trace.advance(
        &format!("P^1_K/G is the conic of symbol ({a}, {b}) = (d, M*conj(M))"),
        "galois-descent-conic",
        &zero,
        class.clone(),
    );
    let (normal, steps) = normalize(&class, &ArithmeticFacts);
    trace.extend(steps);
    Ok((normal, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_descents() {
        let (x, t) = descent_conic_quotient(&DescentDatum::gaussian_quarter_turn()).unwrap();
        assert_eq!(x.render(), "1*L*C(-1,-1) - 1*C(-1,-1) + 1");
        assert!(t.is_chained());
        let split = DescentDatum::from_entries(-1, &[["0", "1"], ["1", "0"]]).unwrap();
        assert_eq!(descent_conic_quotient(&split).unwrap().0.render(), "1*L^2");
        let real = DescentDatum::from_entries(2, &[["0", "1"], ["-1", "0"]]).unwrap();
        assert_eq!(descended_symbol(&real), (2, -1));
        assert_eq!(descent_conic_quotient(&real).unwrap().0.render(), "1*L^2");
    }

    #[test]
    fn rejects_non_scalar_products() {
        let bad = DescentDatum::from_entries(-1, &[["1", "1"], ["0", "1"]]);
        assert_eq!(bad, Err(QuotientError::NotInvolutive));
        let two = DescentDatum::from_entries(-1, &[["0", "1"], ["2", "0"]]).unwrap();
        assert_eq!(two.group_order(), None);
        assert!(descent_conic_quotient(&two).is_err());
    }

    #[test]
    fn element_list_is_a_group() {
        let dd = DescentDatum::gaussian_quarter_turn();
        let els = dd.semilinear_elements().unwrap();
        assert_eq!(els.len(), 4);
        assert!(els[2].matrix.as_scalar().is_some());
        assert_eq!(els[2].matrix.as_scalar().unwrap(), dd.field().from_int(-1));
        assert_eq!(dd.group_order(), Some(4));
    }
}
