//! Reduction of the supported number fields into `F_{p^D}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::ff::{Elem, GF};
use super::OracleError;
use crate::exact::rat::{pow_mod, rat, Rat};
use crate::exact::{Field, FieldElem, FieldKind, Matrix};

/// A ring map from (the `p`-integral part of) a number field into `F_{p^D}`.
///
/// For quadratic and relative quadratic fields the top generator has two images,
/// the roots of its minimal polynomial; [`Reduction::reduce`] uses the first.
#[derive(Clone, Debug)]
pub struct Reduction {
    gf: GF,
    field: Field,
    /// Image of the generator of the absolute field underneath (cyclotomic or quadratic).
    base_gen: Option<Elem>,
    /// Both images of the top quadratic generator.
    top_roots: Option<[Elem; 2]>,
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl Reduction {
    pub fn new(field: &Field, gf: GF) -> Result<Reduction, OracleError> {
        let p = gf.p();
        let bad = |reason: String| OracleError::BadReduction { p, reason };
        let sqrt_of = |r: &Rat| -> Result<Elem, OracleError> {
            let v = reduce_rat(r, p).ok_or_else(|| bad("denominator divisible by p".into()))?;
            if v == 0 {
                return Err(bad(format!("p divides the discriminant of {}", field.name())));
            }
            gf.sqrt(&gf.from_int(v as i64)).ok_or_else(|| {
                bad(format!("no square root of {v} in F_{p}^{}", gf.degree()))
            })
        };
        let absolute_gen = |k: &Field| -> Result<Option<Elem>, OracleError> {
            match k.kind() {
                FieldKind::Rational => Ok(None),
                FieldKind::Cyclotomic(m) => gf
                    .element_of_order(*m)
                    .map(Some)
                    .ok_or_else(|| bad(format!("no element of order {m} in F_{p}^{}", gf.degree()))),
                FieldKind::Quadratic(d) => sqrt_of(&rat(*d)).map(Some),
                FieldKind::RelativeQuadratic { .. } => unreachable!("relative base"),
            }
        };
        let (base_gen, top_roots) = match field.kind() {
            FieldKind::Quadratic(d) => {
                let s = sqrt_of(&rat(*d))?;
                let t = gf.neg(&s);
                (None, Some([s, t]))
            }
            FieldKind::RelativeQuadratic { base, c1, c0 } => {
                let disc = c1 * c1 - rat(4) * c0;
                let s = sqrt_of(&disc)?;
                let c1r = gf.from_int(
                    reduce_rat(c1, p).ok_or_else(|| bad("denominator divisible by p".into()))? as i64,
                );
                let half = gf.from_int(((p + 1) / 2) as i64);
                let r1 = gf.mul(&gf.sub(&s, &c1r), &half);
                let r2 = gf.sub(&gf.neg(&c1r), &r1);
                (absolute_gen(base)?, Some([r1, r2]))
            }
            _ => (absolute_gen(field)?, None),
        };
        Ok(Reduction {
            gf,
            field: field.clone(),
            base_gen,
            top_roots,
        })
    }

    pub fn gf(&self) -> &GF {
        &self.gf
    }

    /// The two images of the top quadratic generator, if any.
    pub fn top_roots(&self) -> Option<&[Elem; 2]> {
        self.top_roots.as_ref()
    }

    fn reduce_absolute(&self, coords: &[Rat], gen: Option<&Elem>) -> Result<Elem, OracleError> {
        let p = self.gf.p();
        let mut acc = self.gf.zero();
        let mut power = self.gf.one();
        for (i, c) in coords.iter().enumerate() {
            let v = reduce_rat(c, p).ok_or_else(|| OracleError::BadReduction {
                p,
                reason: format!("coefficient {c} has denominator divisible by p"),
            })?;
            if i > 0 {
                power = self.gf.mul(&power, gen.expect("generator image"));
            }
            acc = self.gf.add(&acc, &self.gf.scale(&power, v));
        }
        Ok(acc)
    }

    /// Image of `x`, with the top generator sent to `top` when the field has one.
    pub fn reduce_at(&self, x: &FieldElem, top: Option<&Elem>) -> Result<Elem, OracleError> {
        match self.field.kind() {
            FieldKind::Quadratic(_) => self.reduce_absolute(x.coords(), top),
            FieldKind::RelativeQuadratic { .. } => {
                let (a, b) = x.relative_parts();
                let ra = self.reduce_absolute(a.coords(), self.base_gen.as_ref())?;
                let rb = self.reduce_absolute(b.coords(), self.base_gen.as_ref())?;
                Ok(self.gf.add(&ra, &self.gf.mul(&rb, top.expect("root image"))))
            }
            _ => self.reduce_absolute(x.coords(), self.base_gen.as_ref()),
        }
    }

    pub fn reduce(&self, x: &FieldElem) -> Result<Elem, OracleError> {
        self.reduce_at(x, self.top_roots.as_ref().map(|r| &r[0]))
    }

    pub fn reduce_matrix_at(
        &self,
        m: &Matrix,
        top: Option<&Elem>,
    ) -> Result<Vec<Vec<Elem>>, OracleError> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| self.reduce_at(m.get(i, j), top)).collect())
            .collect()
    }

    pub fn reduce_matrix(&self, m: &Matrix) -> Result<Vec<Vec<Elem>>, OracleError> {
        self.reduce_matrix_at(m, self.top_roots.as_ref().map(|r| &r[0]))
    }
}

/// `r mod p`, or `None` when `p` divides the denominator.
pub fn reduce_rat(r: &Rat, p: u64) -> Option<u64> {
    let d = big_mod(r.denom(), p);
    if d == 0 {
        return None;
    }
    let n = if r.numer().is_negative() {
        (p - big_mod(&-r.numer(), p)) % p
    } else {
        big_mod(r.numer(), p)
    };
    Some(n * pow_mod(d, p - 2, p) % p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_elem;

    #[test]
    fn reduction_is_a_ring_map() {
        for (k, p, d) in [
            (Field::cyclotomic(4).unwrap(), 5u64, 1usize),
            (Field::cyclotomic(3).unwrap(), 5, 2),
            (Field::quadratic(-1).unwrap(), 3, 2),
            (Field::quadratic(2).unwrap(), 7, 1),
        ] {
            let r = Reduction::new(&k, GF::new(p, d)).unwrap();
            let a = parse_elem("1/2 + 3*z", &k).unwrap();
            let b = parse_elem("2 - z", &k).unwrap();
            let g = r.gf();
            assert_eq!(
                r.reduce(&(&a * &b)).unwrap(),
                g.mul(&r.reduce(&a).unwrap(), &r.reduce(&b).unwrap())
            );
            assert_eq!(
                r.reduce(&(&a + &b)).unwrap(),
                g.add(&r.reduce(&a).unwrap(), &r.reduce(&b).unwrap())
            );
        }
    }

    #[test]
    fn bad_denominators() {
        let q = Field::rational();
        let r = Reduction::new(&q, GF::new(3, 1)).unwrap();
        assert!(r.reduce(&q.from_rat(crate::exact::rat::ratio(1, 3))).is_err());
        assert_eq!(reduce_rat(&crate::exact::rat::ratio(-1, 2), 5), Some(2));
    }
}
