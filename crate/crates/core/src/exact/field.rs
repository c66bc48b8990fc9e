use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::embed::CyclotomicEmbedding;
use super::poly::{cyclotomic_poly, poly_xgcd, UniPoly};
use super::rat::{rat, render_rat, squarefree, squarefree_class, Rat};
use super::ExactError;

/// Shape of a supported number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    /// `Q(ζ_M)`, generator `z = ζ_M`, modulus `Φ_M`.
    Cyclotomic(u64),
    /// `Q(√d)` with `d` squarefree, generator `z = √d`.
    Quadratic(i64),
    /// `base(w)` with `w² + c1·w + c0 = 0`, rational `c0, c1`, over an absolute base.
    RelativeQuadratic { base: Field, c1: Rat, c0: Rat },
}

#[derive(Debug)]
pub struct NumberField {
    kind: FieldKind,
    /// Absolute modulus for absolute kinds; relative minimal polynomial otherwise.
    modulus: UniPoly,
    degree: usize,
}

/// Shared handle to a number field; compares by value.
#[derive(Clone, Debug)]
pub struct Field(Arc<NumberField>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl Deref for Field {
    type Target = NumberField;
    fn deref(&self) -> &NumberField {
        &self.0
    }
}

impl Field {
    pub fn rational() -> Field {
        Field(Arc::new(NumberField {
            kind: FieldKind::Rational,
            modulus: UniPoly::t(),
            degree: 1,
        }))
    }

    pub fn cyclotomic(m: u64) -> Result<Field, ExactError> {
        if m == 0 {
            return Err(ExactError::InvalidField("cyclotomic level must be >= 1".into()));
        }
        let modulus = cyclotomic_poly(m);
        let degree = modulus.degree().unwrap();
        Ok(Field(Arc::new(NumberField {
            kind: FieldKind::Cyclotomic(m),
            modulus,
            degree,
        })))
    }

    pub fn quadratic(d: i64) -> Result<Field, ExactError> {
        if d == 0 || d == 1 || squarefree(d) != d {
            return Err(ExactError::InvalidField(format!(
                "quadratic field needs a squarefree d other than 0 and 1, got {d}"
            )));
        }
        Ok(Field(Arc::new(NumberField {
            kind: FieldKind::Quadratic(d),
            modulus: UniPoly::from_ints(&[-d, 0, 1]),
            degree: 2,
        })))
    }

    /// `base[w]/(w² + c1·w + c0)`; the base must be absolute and the polynomial irreducible over it.
    pub fn relative_quadratic(base: &Field, c1: Rat, c0: Rat) -> Result<Field, ExactError> {
        if matches!(base.kind, FieldKind::RelativeQuadratic { .. }) {
            return Err(ExactError::InvalidField(
                "relative quadratic towers are limited to one step".into(),
            ));
        }
        let disc = &c1 * &c1 - rat(4) * &c0;
        let d = squarefree_class(&disc).ok_or_else(|| {
            ExactError::InvalidField("relative minimal polynomial has a double root".into())
        })?;
        if base.contains_sqrt(d)? {
            return Err(ExactError::InvalidField(format!(
                "w^2 + ({})w + ({}) splits over the base",
                render_rat(&c1),
                render_rat(&c0)
            )));
        }
        let modulus = UniPoly::new(vec![c0.clone(), c1.clone(), Rat::one()]);
        Ok(Field(Arc::new(NumberField {
            degree: 2 * base.degree,
            kind: FieldKind::RelativeQuadratic {
                base: base.clone(),
                c1,
                c0,
            },
            modulus,
        })))
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            coords: vec![Rat::zero(); self.degree],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_rat(Rat::one())
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rat(rat(n))
    }

    pub fn from_rat(&self, r: Rat) -> FieldElem {
        let mut e = self.zero();
        e.coords[0] = r;
        e
    }

    /// The absolute generator `z` (for a relative field, the base generator).
    pub fn generator(&self) -> FieldElem {
        match &self.kind {
            FieldKind::Rational => self.one(),
            FieldKind::Cyclotomic(_) | FieldKind::Quadratic(_) => {
                if self.degree == 1 {
                    // Q(ζ_1) and Q(ζ_2): z = ±1
                    let root = -self.modulus.coeff(0);
                    return self.from_rat(root);
                }
                let mut e = self.zero();
                e.coords[1] = Rat::one();
                e
            }
            FieldKind::RelativeQuadratic { base, .. } => self.embed_base(&base.generator()),
        }
    }

    /// The relative generator `w`; `None` for absolute fields.
    pub fn relative_generator(&self) -> Option<FieldElem> {
        match &self.kind {
            FieldKind::RelativeQuadratic { base, .. } => {
                let mut e = self.zero();
                e.coords[base.degree] = Rat::one();
                Some(e)
            }
            _ => None,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &self.kind {
            FieldKind::RelativeQuadratic { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Embeds a base element into a relative field.
    pub fn embed_base(&self, x: &FieldElem) -> FieldElem {
        let base = self.base().expect("embed_base on an absolute field");
        assert_eq!(&x.field, base, "element is not from the base field");
        let mut e = self.zero();
        e.coords[..base.degree].clone_from_slice(&x.coords);
        e
    }

    /// Builds an element from coordinates in the field's Q-basis.
    pub fn from_coords(&self, mut coords: Vec<Rat>) -> FieldElem {
        assert!(coords.len() <= self.degree, "too many coordinates");
        coords.resize(self.degree, Rat::zero());
        FieldElem {
            field: self.clone(),
            coords,
        }
    }

    /// Builds an element from a polynomial in `z`, reduced modulo the absolute modulus.
    pub fn from_poly(&self, p: &UniPoly) -> FieldElem {
        match &self.kind {
            FieldKind::RelativeQuadratic { base, .. } => self.embed_base(&base.from_poly(p)),
            _ => {
                if self.degree == 1 {
                    let z = -self.modulus.coeff(0);
                    return self.from_rat(p.eval(&z));
                }
                let r = p.rem(&self.modulus);
                self.from_coords(r.coeffs().to_vec())
            }
        }
    }

    /// True when `√d` lies in this field, for a nonzero integer `d`.
    pub fn contains_sqrt(&self, d: i64) -> Result<bool, ExactError> {
        if d == 0 {
            return Ok(true);
        }
        let d = squarefree(d);
        if d == 1 {
            return Ok(true);
        }
        match &self.kind {
            FieldKind::Rational => Ok(false),
            FieldKind::Quadratic(d0) => Ok(d == *d0),
            _ => CyclotomicEmbedding::of(self)?.contains_sqrt(d),
        }
    }

    /// Order `W` of the group of roots of unity in this field.
    pub fn unit_root_order(&self) -> u64 {
        match &self.kind {
            FieldKind::Rational => 2,
            FieldKind::Cyclotomic(m) => {
                if m % 2 == 0 {
                    *m
                } else {
                    2 * m
                }
            }
            FieldKind::Quadratic(-1) => 4,
            FieldKind::Quadratic(-3) => 6,
            FieldKind::Quadratic(_) => 2,
            FieldKind::RelativeQuadratic { .. } => CyclotomicEmbedding::of(self)
                .map(|e| e.unit_root_order())
                .unwrap_or(2),
        }
    }

    /// A fixed generator of the roots of unity of this field.
    pub fn unit_root_generator(&self) -> FieldElem {
        match &self.kind {
            FieldKind::Rational => self.from_int(-1),
            FieldKind::Cyclotomic(m) => {
                let z = self.generator();
                if m % 2 == 0 {
                    z
                } else {
                    -z
                }
            }
            FieldKind::Quadratic(-1) => self.generator(),
            FieldKind::Quadratic(-3) => {
                // (1 + √-3)/2 has order 6
                (self.one() + self.generator()).scale(&Rat::new(1.into(), 2.into()))
            }
            FieldKind::Quadratic(_) => self.from_int(-1),
            FieldKind::RelativeQuadratic { .. } => CyclotomicEmbedding::of(self)
                .ok()
                .and_then(|e| e.unit_root_generator())
                .unwrap_or_else(|| self.from_int(-1)),
        }
    }

    /// A fixed primitive `n`-th root of unity, when the field contains one.
    pub fn primitive_root_of_unity(&self, n: u64) -> Option<FieldElem> {
        let w = self.unit_root_order();
        if n == 0 || w % n != 0 {
            return None;
        }
        Some(self.unit_root_generator().pow((w / n) as i64))
    }

    /// Whether `μ_n ⊂ k`.
    pub fn contains_nth_roots(&self, n: u64) -> bool {
        n >= 1 && self.unit_root_order() % n == 0
    }

    /// Galois conjugation of a quadratic (absolute or relative) field.
    pub fn conjugate(&self, x: &FieldElem) -> Option<FieldElem> {
        match &self.kind {
            FieldKind::Quadratic(_) => {
                let mut y = x.clone();
                y.coords[1] = -&y.coords[1];
                Some(y)
            }
            FieldKind::RelativeQuadratic { c1, .. } => {
                // w -> -c1 - w
                let (a, b) = x.relative_parts();
                let a2 = &a - &b.scale(c1);
                let b2 = -b;
                Some(self.from_parts(&a2, &b2))
            }
            _ => None,
        }
    }

    fn from_parts(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut coords = a.coords.clone();
        coords.extend(b.coords.iter().cloned());
        FieldElem {
            field: self.clone(),
            coords,
        }
    }
}

impl NumberField {
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// Degree over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Short human-readable name, e.g. `Q(zeta_4)`.
    pub fn name(&self) -> String {
        match &self.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Cyclotomic(m) => format!("Q(zeta_{m})"),
            FieldKind::Quadratic(d) => format!("Q(sqrt({d}))"),
            FieldKind::RelativeQuadratic { base, c1, c0 } => format!(
                "{}[w]/(w^2 + ({})*w + ({}))",
                base.name(),
                render_rat(c1),
                render_rat(c0)
            ),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Element of a number field, stored as rational coordinates in the field's Q-basis.
///
/// Absolute fields use the power basis `1, z, z², …`; a relative field stores
/// `a + b·w` as the coordinates of `a` followed by those of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: Field,
    coords: Vec<Rat>,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Residue polynomial in `z` (absolute fields only).
    pub fn residue(&self) -> UniPoly {
        UniPoly::new(self.coords.clone())
    }

    /// `(a, b)` with `x = a + b·w` over the base of a relative field.
    pub fn relative_parts(&self) -> (FieldElem, FieldElem) {
        let base = self.field.base().expect("not a relative field");
        let n = base.degree;
        (
            base.from_coords(self.coords[..n].to_vec()),
            base.from_coords(self.coords[n..].to_vec()),
        )
    }

    fn check_same(&self, o: &FieldElem) {
        assert!(
            self.field == o.field,
            "mixed fields: {} vs {}",
            self.field,
            o.field
        );
    }

    pub fn scale(&self, r: &Rat) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    fn add_impl(&self, o: &FieldElem) -> FieldElem {
        self.check_same(o);
        FieldElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub_impl(&self, o: &FieldElem) -> FieldElem {
        self.check_same(o);
        FieldElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn neg_impl(&self) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    fn mul_impl(&self, o: &FieldElem) -> FieldElem {
        self.check_same(o);
        match &self.field.kind {
            FieldKind::RelativeQuadratic { c1, c0, .. } => {
                let (a, b) = self.relative_parts();
                let (c, d) = o.relative_parts();
                let bd = &b * &d;
                let re = &(&a * &c) - &bd.scale(c0);
                let im = &(&(&a * &d) + &(&b * &c)) - &bd.scale(c1);
                self.field.from_parts(&re, &im)
            }
            _ => {
                if self.field.degree == 1 {
                    return self.field.from_rat(&self.coords[0] * &o.coords[0]);
                }
                let prod = self.residue().mul(&o.residue());
                self.field.from_poly(&prod)
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        match &self.field.kind {
            FieldKind::RelativeQuadratic { c1, c0, .. } => {
                let (a, b) = self.relative_parts();
                let norm = &(&(&a * &a) - &(&a * &b).scale(c1)) + &(&b * &b).scale(c0);
                let ninv = norm.inv()?;
                let re = &(&a - &b.scale(c1)) * &ninv;
                let im = -(&b * &ninv);
                Some(self.field.from_parts(&re, &im))
            }
            _ => {
                if self.field.degree == 1 {
                    return Some(self.field.from_rat(self.coords[0].recip()));
                }
                let (g, s, _) = poly_xgcd(&self.residue(), &self.field.modulus);
                debug_assert!(g.is_one_poly());
                Some(self.field.from_poly(&s))
            }
        }
    }

    pub fn pow(&self, e: i64) -> FieldElem {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        acc
    }

    /// Multiplicative order, if finite and at most `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    pub fn conj(&self) -> Option<FieldElem> {
        self.field.conjugate(self)
    }

    /// Canonical text in the generator symbols `z` (and `w` for relative fields).
    pub fn render(&self) -> String {
        let mut terms: Vec<(Rat, String)> = Vec::new();
        let (n, rel) = match self.field.base() {
            Some(b) => (b.degree, true),
            None => (self.field.degree, false),
        };
        let mono = |i: usize| match i {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{i}"),
        };
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, with_w) = if rel && i >= n { (i - n, true) } else { (i, false) };
            // degree-1 absolute fields store only the constant
            let mut m = if self.field.degree == 1 { String::new() } else { mono(j) };
            if with_w {
                m = if m.is_empty() { "w".into() } else { format!("{m}*w") };
            }
            terms.push((c.clone(), m));
        }
        render_terms(&terms)
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for UniPoly {
    fn is_one_poly(&self) -> bool {
        *self == UniPoly::one()
    }
}

pub(crate) fn render_terms(terms: &[(Rat, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, m)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_empty() {
            out.push_str(&render_rat(&abs));
        } else if abs.is_one() {
            out.push_str(m);
        } else {
            out.push_str(&format!("{}*{}", render_rat(&abs), m));
        }
    }
    out
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

macro_rules! bin_op {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                self.$imp(o)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                self.$imp(&o)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                self.$imp(o)
            }
        }
    };
}

bin_op!(Add, add, add_impl);
bin_op!(Sub, sub, sub_impl);
bin_op!(Mul, mul, mul_impl);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_impl()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_impl()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let k = Field::cyclotomic(4).unwrap();
        let z = k.generator();
        assert_eq!(&z * &z, k.from_int(-1));
        assert_eq!(z.inv().unwrap(), -z.clone());
        assert_eq!(z.multiplicative_order(64), Some(4));
        assert_eq!(z.render(), "z");
        assert_eq!((k.from_int(1) - z.scale(&rat(3))).render(), "1 - 3*z");
    }

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(Field::rational().unit_root_order(), 2);
        assert_eq!(Field::cyclotomic(3).unwrap().unit_root_order(), 6);
        assert_eq!(Field::cyclotomic(4).unwrap().unit_root_order(), 4);
        assert_eq!(Field::quadratic(-3).unwrap().unit_root_order(), 6);
        assert_eq!(Field::quadratic(5).unwrap().unit_root_order(), 2);
        for k in [
            Field::rational(),
            Field::cyclotomic(3).unwrap(),
            Field::cyclotomic(12).unwrap(),
            Field::quadratic(-3).unwrap(),
            Field::quadratic(-1).unwrap(),
        ] {
            let w = k.unit_root_order();
            assert_eq!(k.unit_root_generator().multiplicative_order(200), Some(w));
        }
    }

    #[test]
    fn contains_nth_roots_examples() {
        assert!(Field::rational().contains_nth_roots(2));
        assert!(!Field::rational().contains_nth_roots(4));
        assert!(Field::cyclotomic(4).unwrap().contains_nth_roots(4));
    }

    #[test]
    fn relative_field_inverse() {
        let base = Field::cyclotomic(3).unwrap();
        let k = Field::relative_quadratic(&base, Rat::zero(), rat(1)).unwrap(); // w^2 = -1
        let w = k.relative_generator().unwrap();
        let z = k.generator();
        let x = &(&w + &z) + &k.from_int(2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(&w * &w, k.from_int(-1));
        assert_eq!(k.unit_root_order(), 12);
        assert!(Field::relative_quadratic(&base, Rat::zero(), rat(3)).is_err()); // √-3 ∈ Q(ζ3)
    }

    #[test]
    fn bad_quadratics_rejected() {
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(1).is_err());
        assert!(Field::quadratic(0).is_err());
    }
}
