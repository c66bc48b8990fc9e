use std::fmt;

use super::field::{Field, FieldElem};
use super::fpoly::FieldPoly;
use super::rat::rat;
use super::ExactError;

pub type Vector = Vec<FieldElem>;

/// Dense row-major matrix over a number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElem>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(ExactError::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if e.field() != field {
                    return Err(ExactError::MixedFields(e.field().name(), field.name()));
                }
                data.push(e);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn diagonal(field: &Field, entries: &[FieldElem]) -> Self {
        let mut m = Self::zero(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Self {
        let field = blocks[0].field.clone();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(&field, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        m
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(field: &Field, cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zero(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, e) in c.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Matrix::zero(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    fn zip_with(&self, o: &Matrix, f: impl Fn(&FieldElem, &FieldElem) -> FieldElem) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    /// Entry-wise Galois conjugate (quadratic fields only).
    pub fn conj(&self) -> Option<Matrix> {
        let data: Option<Vec<_>> = self.data.iter().map(|x| x.conj()).collect();
        Some(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: data?,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut b = self.clone();
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// `Some(λ)` when the matrix is `λ·I`.
    pub fn as_scalar(&self) -> Option<FieldElem> {
        if !self.is_square() || !self.is_diagonal() {
            return None;
        }
        let l = self.get(0, 0).clone();
        (1..self.rows)
            .all(|i| self.get(i, i) == &l)
            .then_some(l)
    }

    pub fn trace(&self) -> FieldElem {
        (0..self.rows).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    /// Solves `self · x = b`; `None` if inconsistent. Free variables are zero.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vector> {
        let mut aug = Matrix::zero(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> FieldElem {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                for j in 0..n {
                    let a = m.get(c, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(c, j, b);
                    m.set(p, j, a);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(T·I - A)` by the Faddeev–LeVerrier recurrence.
    pub fn charpoly(&self) -> FieldPoly {
        assert!(self.is_square());
        let n = self.rows;
        let k = &self.field;
        let mut coeffs = vec![k.zero(); n + 1];
        coeffs[n] = k.one();
        let id = Matrix::identity(k, n);
        let mut mk = Matrix::zero(k, n, n);
        for step in 1..=n {
            mk = self.mul(&mk).add(&id.scale(&coeffs[n - step + 1]));
            let am = self.mul(&mk);
            coeffs[n - step] = -am.trace().scale(&rat(step as i64).recip());
        }
        FieldPoly::new(k, coeffs)
    }

    /// Least `e <= bound` with `A^e = I`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for e in 1..=bound {
            if acc.is_identity() {
                return Some(e);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// Matrix of the restriction to the span of `basis` (assumed invariant), in that basis.
    pub fn restrict(&self, basis: &[Vector]) -> Option<Matrix> {
        let b = Matrix::from_columns(&self.field, basis);
        let cols: Option<Vec<Vector>> = basis.iter().map(|v| b.solve(&self.mul_vec(v))).collect();
        let cols = cols?;
        // verify invariance exactly
        for (v, c) in basis.iter().zip(&cols) {
            if b.mul_vec(c) != self.mul_vec(v) {
                return None;
            }
        }
        Some(Matrix::from_columns(&self.field, &cols))
    }

    /// Renders as nested lists of element strings.
    pub fn render_rows(&self) -> Vec<Vec<String>> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(|e| e.render()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .render_rows()
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
