use std::fmt;

use super::field::{Field, FieldElem};
use super::matrix::Matrix;
use super::poly::UniPoly;

/// Univariate polynomial over a number field, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldPoly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl FieldPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from another field");
        }
        FieldPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, vec![])
    }

    pub fn one(field: &Field) -> Self {
        Self::new(field, vec![field.one()])
    }

    pub fn t(field: &Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `T - root`
    pub fn linear(root: &FieldElem) -> Self {
        let k = root.field();
        Self::new(k, vec![-root, k.one()])
    }

    pub fn from_rational(field: &Field, p: &UniPoly) -> Self {
        Self::new(
            field,
            p.coeffs().iter().map(|c| field.from_rat(c.clone())).collect(),
        )
    }

    /// The same polynomial over Q, when all coefficients are rational.
    pub fn to_rational(&self) -> Option<UniPoly> {
        let cs: Option<Vec<_>> = self.coeffs.iter().map(|c| c.as_rational()).collect();
        cs.map(UniPoly::new)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.field, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.field, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = &rem[i - dd + j] - &(&c * dc);
            }
            q[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(&self.field, q), Self::new(&self.field, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut x, mut y) = (self.clone(), o.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// `p(m)` for a square matrix `m`.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zero(&self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(&self.field, n).scale(c));
        }
        acc
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.to_rational() {
            return write!(f, "{p}");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let cs = c.render();
            let s = if mono.is_empty() {
                format!("({cs})")
            } else if c.is_one() {
                mono
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}
