//! A rational generator of `k(t)^G` for the induced action of `G` on `P¹ = P(V)`.

use std::fmt;

use super::QuotientError;
use crate::exact::{Field, FieldElem, FieldPoly, Matrix};
use crate::repgroup::GroupAction;

/// `f = numerator/denominator ∈ k(t)` with `k(f) = k(t)^Ḡ`, certified by `deg f = |Ḡ|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LurothGenerator {
    pub numerator: FieldPoly,
    /// Monic.
    pub denominator: FieldPoly,
    pub degree: usize,
    /// Order of the image `Ḡ` of `G` in `PGL_2(k)`.
    pub image_order: usize,
    /// Index `j` of the elementary symmetric function `e_j` of the orbit of `t`.
    pub symmetric_index: usize,
    /// A rational point `f(t0)` of the quotient line.
    pub point: FieldElem,
    pub t0: i64,
}

impl LurothGenerator {
    pub fn render(&self) -> String {
        if self.denominator.degree() == Some(0) {
            format!("{}", self.numerator).replace('T', "t")
        } else {
            format!("({})/({})", self.numerator, self.denominator).replace('T', "t")
        }
    }
}

impl fmt::Display for LurothGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Scales a matrix so that its first nonzero entry is 1.
fn projective_normal_form(m: &Matrix) -> Matrix {
    let lead = m
        .entries()
        .iter()
        .find(|x| !x.is_zero())
        .expect("invertible matrix")
        .inv()
        .expect("nonzero");
    m.scale(&lead)
}

/// Distinct elements of the image of `G` in `PGL_2(k)`.
pub fn projective_image(a: &GroupAction) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    for m in a.image() {
        let n = projective_normal_form(&m);
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

fn degree(p: &FieldPoly) -> usize {
    p.degree().unwrap_or(0)
}

/// `f = e_j(g_1(t), …, g_m(t))` for the first non-constant `e_j`, with a `k`-point.
pub fn p1_invariant_generator(a: &GroupAction) -> Result<LurothGenerator, QuotientError> {
    if a.dim() != 2 {
        return Err(QuotientError::Invalid(format!(
            "P(V) is a line only for dim V = 2, got {}",
            a.dim()
        )));
    }
    let k: &Field = a.field();
    let image = projective_image(a);
    let m = image.len();
    let t = FieldPoly::t(k);
    let constant = |x: &FieldElem| FieldPoly::new(k, vec![x.clone()]);
    // Π_g (X·(c t + d) - (a t + b)) as a polynomial in X over k[t]
    let mut product: Vec<FieldPoly> = vec![FieldPoly::one(k)];
    for g in &image {
        let num = t.scale(g.get(0, 0)).add(&constant(g.get(0, 1)));
        let den = t.scale(g.get(1, 0)).add(&constant(g.get(1, 1)));
        let mut next = vec![FieldPoly::zero(k); product.len() + 1];
        for (i, c) in product.iter().enumerate() {
            next[i + 1] = next[i + 1].add(&c.mul(&den));
            next[i] = next[i].sub(&c.mul(&num));
        }
        product = next;
    }
    let lead = product[m].clone();
    for j in 1..=m {
        let mut num = product[m - j].clone();
        if j % 2 == 1 {
            num = num.scale(&k.from_int(-1));
        }
        let g = num.gcd(&lead);
        let (mut num, _) = num.divrem(&g);
        let (mut den, _) = lead.divrem(&g);
        let dl = den.coeffs().last().expect("nonzero").inv().expect("nonzero");
        num = num.scale(&dl);
        den = den.scale(&dl);
        let deg = degree(&num).max(degree(&den));
        if deg == 0 {
            continue;
        }
        if deg != m {
            return Err(QuotientError::CertificationFailed(format!(
                "e_{j} has degree {deg}, expected |image in PGL_2| = {m}"
            )));
        }
        let (t0, point) = (0i64..)
            .find_map(|t0| {
                let x = k.from_int(t0);
                let d = den.eval(&x);
                (!d.is_zero()).then(|| (t0, num.eval(&x) * d.inv().expect("nonzero")))
            })
            .expect("a polynomial has finitely many roots");
        return Ok(LurothGenerator {
            numerator: num,
            denominator: den,
            degree: deg,
            image_order: m,
            symmetric_index: j,
            point,
            t0,
        });
    }
    Err(QuotientError::CertificationFailed(
        "every symmetric function of the orbit of t is constant".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_generators() {
        let q = Field::rational();
        let refl = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, 1]]), 2).unwrap();
        let f = p1_invariant_generator(&refl).unwrap();
        assert_eq!((f.degree, f.symmetric_index), (2, 2));
        assert_eq!(f.render(), "-t^2");

        let rot = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]), 4).unwrap();
        let f = p1_invariant_generator(&rot).unwrap();
        assert_eq!((f.degree, f.image_order, f.symmetric_index), (2, 2, 1));
        assert_eq!(f.render(), "(t^2 - 1)/(t)");
        assert_eq!(f.t0, 1);

        let triv = GroupAction::trivial(&q, 2);
        let f = p1_invariant_generator(&triv).unwrap();
        assert_eq!((f.degree, f.render().as_str()), (1, "t"));
    }

    #[test]
    fn order_three_companion() {
        let q = Field::rational();
        let c = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[0, -1], &[1, -1]]), 3).unwrap();
        let f = p1_invariant_generator(&c).unwrap();
        assert_eq!((f.degree, f.image_order), (3, 3));
    }
}
