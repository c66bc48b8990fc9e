//! Finite fields `F_{p^D}` in a polynomial basis, and dense linear algebra over `F_p`.

use crate::exact::rat::{pow_mod, prime_factors};

/// Polynomial over `F_p`, constant term first, trimmed.
type FpPoly = Vec<u64>;

fn trim(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> FpPoly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let li = fp_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * li % p;
        let shift = top - dm;
        for (j, &mc) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * mc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `x^(p^e) mod m`
fn x_pow_p_pow(e: usize, m: &[u64], p: u64) -> FpPoly {
    let mut cur = poly_rem(&[0, 1], m, p);
    for _ in 0..e {
        // raise to the p-th power by repeated squaring
        let mut acc: FpPoly = vec![1];
        let mut base = cur.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            k >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's irreducibility test for a monic polynomial of degree `d`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    let x = vec![0, 1];
    if poly_sub(&x_pow_p_pow(d, m, p), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(d as u64) {
        let h = poly_sub(&x_pow_p_pow(d / r as usize, m, p), &x, p);
        if poly_gcd(m, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// The finite field `F_{p^D}`; elements are coefficient vectors of length `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF {
    p: u64,
    d: usize,
    modulus: Vec<u64>,
}

pub type Elem = Vec<u64>;

impl GF {
    /// `F_{p^d}` with the lexicographically first monic irreducible modulus.
    pub fn new(p: u64, d: usize) -> GF {
        assert!(d >= 1 && p >= 2);
        if d == 1 {
            return GF {
                p,
                d,
                modulus: vec![0, 1],
            };
        }
        let mut tail = vec![0u64; d];
        loop {
            let mut m = tail.clone();
            m.push(1);
            if m[0] != 0 && is_irreducible(&m, p) {
                return GF { p, d, modulus: m };
            }
            // next candidate in base-p order
            let mut i = 0;
            loop {
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                i += 1;
                assert!(i < d, "no irreducible polynomial found");
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `p^D`, when it fits in 64 bits.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.d as u32)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.d]
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.p as i64) as u64;
        e
    }

    fn pad(&self, v: FpPoly) -> Elem {
        let mut v = v;
        v.resize(self.d, 0);
        v
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.pad(poly_mulmod(a, b, &self.modulus, self.p))
    }

    pub fn scale(&self, a: &Elem, c: u64) -> Elem {
        a.iter().map(|x| x * (c % self.p) % self.p).collect()
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// Element with base-`p` digits `index` (the enumeration order of the field).
    pub fn from_index(&self, mut index: u128) -> Elem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = (index % self.p as u128) as u64;
            index /= self.p as u128;
        }
        e
    }

    pub fn index(&self, a: &Elem) -> u128 {
        a.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    /// Whether `a` has multiplicative order exactly `m`.
    pub fn has_order(&self, a: &Elem, m: u128) -> bool {
        if self.is_zero(a) || self.pow(a, m) != self.one() {
            return false;
        }
        prime_factors(m as u64)
            .into_iter()
            .all(|r| self.pow(a, m / r as u128) != self.one())
    }

    /// First element (in index order) of multiplicative order exactly `m`.
    pub fn element_of_order(&self, m: u64) -> Option<Elem> {
        let q1 = self.order() - 1;
        if q1 % m as u128 != 0 {
            return None;
        }
        let cof = q1 / m as u128;
        (1..self.order()).find_map(|i| {
            let cand = self.pow(&self.from_index(i), cof);
            self.has_order(&cand, m as u128).then_some(cand)
        })
    }

    /// A square root, when one exists (Tonelli–Shanks).
    pub fn sqrt(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let q = self.order();
        if self.p == 2 {
            return Some(self.pow(a, q / 2));
        }
        let minus_one = self.from_int(-1);
        if self.pow(a, (q - 1) / 2) != self.one() {
            return None;
        }
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (1..q)
            .map(|i| self.from_index(i))
            .find(|c| self.pow(c, (q - 1) / 2) == minus_one)
            .expect("non-residue exists");
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut tt = self.pow(a, t);
        let mut r = self.pow(a, t.div_ceil(2));
        while tt != self.one() {
            let mut i = 0;
            let mut x = tt.clone();
            while x != self.one() {
                x = self.mul(&x, &x);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    /// `D × D` matrix over `F_p` of the linear map `x ↦ f(x)`, columns are images of the basis.
    pub fn linear_map_matrix(&self, f: impl Fn(&Elem) -> Elem) -> FpMatrix {
        let mut m = FpMatrix::zero(self.p, self.d, self.d);
        for j in 0..self.d {
            let mut e = self.zero();
            e[j] = 1;
            let img = f(&e);
            for i in 0..self.d {
                m.set(i, j, img[i]);
            }
        }
        m
    }
}

/// Dense matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                let (a, b) = (m.get(r, j), m.get(piv, j));
                m.set(r, j, b);
                m.set(piv, j, a);
            }
            let inv = fp_inv(m.get(r, c), p);
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = (m.get(i, j) + p - f * m.get(r, j) % p) % p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut out = Vec::new();
        for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; m.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m.get(row, free)) % p;
            }
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables_are_consistent() {
        for (p, d) in [(3, 2), (5, 2), (3, 4), (7, 1), (2, 3)] {
            let f = GF::new(p, d);
            let q = f.order();
            // every nonzero element satisfies a^(q-1) = 1, and Frobenius is additive and multiplicative
            for i in 1..q.min(200) {
                let a = f.from_index(i);
                assert_eq!(f.pow(&a, q - 1), f.one());
                let b = f.from_index((i * 7 + 3) % q);
                let fr = |x: &Elem| f.pow(x, p as u128);
                assert_eq!(fr(&f.add(&a, &b)), f.add(&fr(&a), &fr(&b)));
                assert_eq!(fr(&f.mul(&a, &b)), f.mul(&fr(&a), &fr(&b)));
            }
            assert!(f.element_of_order((q - 1) as u64).is_some());
        }
    }

    #[test]
    fn square_roots() {
        let f = GF::new(5, 2);
        let mut squares = 0;
        for i in 0..25 {
            let a = f.from_index(i);
            if let Some(r) = f.sqrt(&a) {
                assert_eq!(f.mul(&r, &r), a);
                squares += 1;
            }
        }
        assert_eq!(squares, 13);
        for n in 1..5 {
            assert!(f.sqrt(&f.from_int(n)).is_some());
        }
        let g = GF::new(7, 1);
        assert!(g.sqrt(&g.from_int(3)).is_none());
    }

    #[test]
    fn kernel_dimension() {
        let mut m = FpMatrix::zero(3, 2, 3);
        m.set(0, 0, 1);
        m.set(0, 1, 2);
        m.set(1, 2, 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![1, 1, 0]);
    }
}
