use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::atom::Atom;
use super::KringError;
use crate::exact::Field;

/// `𝕃^lpow · ∏ atoms`, atoms sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub lpow: u32,
    pub atoms: Vec<Atom>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            lpow: 0,
            atoms: vec![],
        }
    }

    pub fn new(lpow: u32, mut atoms: Vec<Atom>) -> Self {
        atoms.sort();
        Monomial { lpow, atoms }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut atoms = self.atoms.clone();
        atoms.extend(o.atoms.iter().cloned());
        Monomial::new(self.lpow + o.lpow, atoms)
    }

    fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.lpow {
            0 => {}
            1 => parts.push("L".to_string()),
            e => parts.push(format!("L^{e}")),
        }
        parts.extend(self.atoms.iter().map(|a| a.render()));
        parts.join("*")
    }
}

/// Element of `Z[𝕃][atoms]` over a base field, kept in normal form
/// (no zero coefficients, sorted atom multisets).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KExpr {
    base: Field,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Named classes of standard varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardClass {
    Affine(u32),
    Projective(u32),
    Gm,
    Point,
}

impl KExpr {
    pub fn zero(base: &Field) -> Self {
        KExpr {
            base: base.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn int(base: &Field, n: i64) -> Self {
        Self::monomial(base, BigInt::from(n), Monomial::one())
    }

    pub fn one(base: &Field) -> Self {
        Self::int(base, 1)
    }

    pub fn monomial(base: &Field, c: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        KExpr {
            base: base.clone(),
            terms,
        }
    }

    /// `𝕃^e`
    pub fn lefschetz_power(base: &Field, e: u32) -> Self {
        Self::monomial(base, BigInt::one(), Monomial::new(e, vec![]))
    }

    pub fn lefschetz(base: &Field) -> Self {
        Self::lefschetz_power(base, 1)
    }

    pub fn atom(base: &Field, a: Atom) -> Self {
        Self::monomial(base, BigInt::one(), Monomial::new(0, vec![a]))
    }

    /// `Σ c_i 𝕃^i`
    pub fn lpoly(base: &Field, coeffs: &[i64]) -> Self {
        let mut out = Self::zero(base);
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(Monomial::new(i as u32, vec![]), BigInt::from(c));
        }
        out
    }

    pub fn standard(base: &Field, class: StandardClass) -> Self {
        match class {
            StandardClass::Affine(n) => Self::lefschetz_power(base, n),
            StandardClass::Projective(n) => Self::lpoly(base, &vec![1; n as usize + 1]),
            StandardClass::Gm => Self::lpoly(base, &[-1, 1]),
            StandardClass::Point => Self::one(base),
        }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct atoms occurring in the expression.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self
            .terms
            .keys()
            .flat_map(|m| m.atoms.iter().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Whether the expression is exactly `𝕃^e`.
    pub fn is_lefschetz_power(&self, e: u32) -> bool {
        *self == Self::lefschetz_power(&self.base, e)
    }

    /// Same terms over another base field.
    pub fn rebase(&self, base: &Field) -> Self {
        KExpr {
            base: base.clone(),
            terms: self.terms.clone(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, o: &KExpr) -> Result<(), KringError> {
        if self.base != o.base {
            return Err(KringError::MixedBaseField(self.base.name(), o.base.name()));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &KExpr) -> Result<KExpr, KringError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &KExpr) -> Result<KExpr, KringError> {
        self.checked_add(&o.neg_impl())
    }

    pub fn checked_mul(&self, o: &KExpr) -> Result<KExpr, KringError> {
        self.check(o)?;
        let mut out = Self::zero(&self.base);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    fn neg_impl(&self) -> KExpr {
        KExpr {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> KExpr {
        let mut out = Self::zero(&self.base);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> KExpr {
        (0..e).fold(Self::one(&self.base), |acc, _| &acc * self)
    }

    /// Replaces every occurrence of `atom` by `by`.
    pub fn substitute_atom(&self, atom: &Atom, by: &KExpr) -> KExpr {
        let mut out = Self::zero(&self.base);
        for (m, c) in &self.terms {
            let count = m.atoms.iter().filter(|a| *a == atom).count() as u32;
            let rest: Vec<Atom> = m.atoms.iter().filter(|a| *a != atom).cloned().collect();
            let term = Self::monomial(&self.base, c.clone(), Monomial::new(m.lpow, rest));
            out = &out + &(&term * &by.pow(count));
        }
        out
    }

    /// Ring map to the integers: `𝕃 ↦ l`, atoms via `value`.
    pub fn evaluate(
        &self,
        l: &BigInt,
        mut value: impl FnMut(&Atom) -> Result<BigInt, KringError>,
    ) -> Result<BigInt, KringError> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c * num_traits::pow(l.clone(), m.lpow as usize);
            for a in &m.atoms {
                t *= value(a)?;
            }
            total += t;
        }
        Ok(total)
    }

    /// Canonical text: terms by descending `(𝕃-power, atoms)`, explicit coefficients.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// The largest `𝕃`-power occurring, if any.
    pub fn lefschetz_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.lpow).max()
    }

    /// Coefficients when the expression is a polynomial in `𝕃` with small coefficients.
    pub fn as_lpoly(&self) -> Option<Vec<i64>> {
        let deg = self.lefschetz_degree().unwrap_or(0) as usize;
        let mut out = vec![0; deg + 1];
        for (m, c) in &self.terms {
            if !m.atoms.is_empty() {
                return None;
            }
            out[m.lpow as usize] = c.to_i64()?;
        }
        Some(out)
    }
}

impl fmt::Display for KExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

macro_rules! ring_op {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&KExpr> for &KExpr {
            type Output = KExpr;
            fn $m(self, o: &KExpr) -> KExpr {
                self.$imp(o).expect("expressions over different base fields")
            }
        }
        impl $tr<KExpr> for KExpr {
            type Output = KExpr;
            fn $m(self, o: KExpr) -> KExpr {
                (&self).$m(&o)
            }
        }
    };
}

ring_op!(Add, add, checked_add);
ring_op!(Sub, sub, checked_sub);
ring_op!(Mul, mul, checked_mul);

impl Neg for &KExpr {
    type Output = KExpr;
    fn neg(self) -> KExpr {
        self.neg_impl()
    }
}

impl Neg for KExpr {
    type Output = KExpr;
    fn neg(self) -> KExpr {
        self.neg_impl()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_examples() {
        let q = Field::rational();
        let l = KExpr::lefschetz(&q);
        let one = KExpr::one(&q);
        assert_eq!((&l - &one) * (&one + &l), KExpr::lpoly(&q, &[-1, 0, 1]));
        let s = KExpr::atom(&q, Atom::etale(-1));
        assert_eq!((&s * &s).render(), "1*SpecQ(sqrt(-1))*SpecQ(sqrt(-1))");
        assert_eq!(&l + &KExpr::zero(&q), l);
    }

    #[test]
    fn canonical_rendering() {
        let q = Field::rational();
        let l = KExpr::lefschetz(&q);
        let c = KExpr::atom(&q, Atom::conic(-1, -1));
        let x = KExpr::one(&q) + (&l - &KExpr::one(&q)) * c;
        assert_eq!(x.render(), "1*L*C(-1,-1) - 1*C(-1,-1) + 1");
        assert_eq!(KExpr::lefschetz_power(&q, 2).render(), "1*L^2");
        assert_eq!(KExpr::zero(&q).render(), "0");
        assert_eq!(KExpr::lpoly(&q, &[-1, 1]).render(), "1*L - 1");
        assert_eq!(KExpr::int(&q, -3).render(), "-3");
    }

    #[test]
    fn standard_classes() {
        let q = Field::rational();
        assert_eq!(KExpr::standard(&q, StandardClass::Projective(1)).render(), "1*L + 1");
        assert_eq!(KExpr::standard(&q, StandardClass::Gm).render(), "1*L - 1");
        assert_eq!(KExpr::standard(&q, StandardClass::Affine(2)).render(), "1*L^2");
    }

    #[test]
    fn mixed_bases_rejected() {
        let q = Field::rational();
        let k = Field::cyclotomic(4).unwrap();
        assert!(matches!(
            KExpr::one(&q).checked_add(&KExpr::one(&k)),
            Err(KringError::MixedBaseField(..))
        ));
    }
}
