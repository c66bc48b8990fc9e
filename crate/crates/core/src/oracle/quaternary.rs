//! The fixed-point equation of `v ↦ M·v̄` on `P¹_K` as a quadratic form over Q.
//!
//! A point `v ∈ K²` is fixed up to scalars iff `D(v) = det(v, M·v̄) = 0`. Writing
//! `v_i = x_i + √d·y_i`, `D` is a `K`-valued quadratic form in `(x1, y1, x2, y2)`
//! with `D̄ = μ·D` for `μ = -c/det M`, so `D = θ·r` for a rational form `r`
//! whenever `θ̄ = μ·θ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::OracleError;
use crate::exact::rat::{legendre, prime_factors, rat, squarefree_class, Rat};
use crate::exact::{Field, FieldElem};
use crate::quotient::DescentDatum;

pub const DEFAULT_QUATERNARY_HEIGHT: u64 = 1_000;
pub const DEFAULT_QUATERNARY_BUDGET: u64 = 2_000_000;

const NAMES: [&str; 4] = ["x1", "y1", "x2", "y2"];

/// `Σ_{i <= j} a_ij·X_i·X_j` in `(x1, y1, x2, y2)`, primitive with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuaternaryForm {
    pub coeffs: [[i64; 4]; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    /// Every diagonal entry of a diagonalization has the same sign.
    Definite { positive: bool },
    /// No primitive zero over `Q_p`.
    Local { p: u64 },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Definite { positive: true } => write!(f, "positive definite"),
            Obstruction::Definite { positive: false } => write!(f, "negative definite"),
            Obstruction::Local { p } => write!(f, "anisotropic over Q_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QuaternaryVerdict {
    /// A verified nontrivial zero `(x1, y1, x2, y2)`.
    Solution { vector: [i64; 4] },
    NoSolution { reason: Obstruction },
}

impl QuaternaryVerdict {
    pub fn has_solution(&self) -> bool {
        matches!(self, QuaternaryVerdict::Solution { .. })
    }
}

impl fmt::Display for QuaternaryVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuaternaryVerdict::Solution { vector: v } => {
                write!(f, "zero at ({}, {}, {}, {})", v[0], v[1], v[2], v[3])
            }
            QuaternaryVerdict::NoSolution { reason } => {
                write!(f, "no nontrivial zero ({reason})")
            }
        }
    }
}

fn lift(field: &Field, x: [i64; 4]) -> [FieldElem; 2] {
    let z = field.generator();
    let comp = |a: i64, b: i64| field.from_int(a) + z.clone() * field.from_int(b);
    [comp(x[0], x[1]), comp(x[2], x[3])]
}

fn fixed_point_det(dd: &DescentDatum, v: &[FieldElem; 2]) -> FieldElem {
    let m = dd.matrix();
    let bar = [v[0].conj().expect("quadratic"), v[1].conj().expect("quadratic")];
    let w0 = m.get(0, 0) * &bar[0] + m.get(0, 1) * &bar[1];
    let w1 = m.get(1, 0) * &bar[0] + m.get(1, 1) * &bar[1];
    &v[0] * &w1 - &v[1] * &w0
}

impl QuaternaryForm {
    /// The rational form whose zeros are the fixed points of `σ̄` on `P¹_K`.
    pub fn of(dd: &DescentDatum) -> Result<QuaternaryForm, OracleError> {
        let k = dd.field();
        let det = dd.matrix().det();
        let mu = -(k.from_rat(dd.c().clone()) * det.inv().expect("invertible"));
        let theta = {
            let t = k.one() + mu.conj().expect("quadratic");
            if t.is_zero() {
                k.generator()
            } else {
                t
            }
        };
        let theta_inv = theta.inv().expect("nonzero");
        let eval = |x: [i64; 4]| -> Result<Rat, OracleError> {
            (fixed_point_det(dd, &lift(k, x)) * &theta_inv)
                .as_rational()
                .ok_or_else(|| {
                    OracleError::SelfCheck(format!(
                        "det(v, M*conj(v)) / {theta} is not rational at {x:?}"
                    ))
                })
        };
        let unit = |i: usize| {
            let mut e = [0; 4];
            e[i] = 1;
            e
        };
        let mut q = vec![vec![Rat::zero(); 4]; 4];
        for i in 0..4 {
            q[i][i] = eval(unit(i))?;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                let mut e = unit(i);
                e[j] = 1;
                q[i][j] = eval(e)? - &q[i][i] - &q[j][j];
            }
        }
        Ok(QuaternaryForm {
            coeffs: primitive(&q),
        })
    }

    pub fn eval(&self, x: &[i64; 4]) -> i128 {
        let mut s = 0i128;
        for i in 0..4 {
            for j in i..4 {
                s += self.coeffs[i][j] as i128 * x[i] as i128 * x[j] as i128;
            }
        }
        s
    }

    /// Symmetric Gram matrix `S` with `r(x) = xᵀ S x`.
    fn gram(&self) -> Vec<Vec<Rat>> {
        let mut s = vec![vec![Rat::zero(); 4]; 4];
        for i in 0..4 {
            s[i][i] = rat(self.coeffs[i][i]);
            for j in i + 1..4 {
                let h = Rat::new(self.coeffs[i][j].into(), 2.into());
                s[i][j] = h.clone();
                s[j][i] = h;
            }
        }
        s
    }

    pub fn render(&self) -> String {
        let mut terms: Vec<(Rat, String)> = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let c = self.coeffs[i][j];
                if c == 0 {
                    continue;
                }
                let mono = if i == j {
                    format!("{}^2", NAMES[i])
                } else {
                    format!("{}*{}", NAMES[i], NAMES[j])
                };
                terms.push((rat(c), mono));
            }
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (c, mono)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&format!("{a}*"));
            }
            out.push_str(mono);
        }
        out
    }
}

impl fmt::Display for QuaternaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn primitive(q: &[Vec<Rat>]) -> [[i64; 4]; 4] {
    let mut den = BigInt::one();
    for r in q.iter().flatten() {
        den = den.lcm(r.denom());
    }
    let ints: Vec<BigInt> = q
        .iter()
        .flatten()
        .map(|r| (r * Rat::from(den.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return [[0; 4]; 4];
    }
    if ints.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
        g = -g;
    }
    let mut out = [[0i64; 4]; 4];
    for (n, x) in ints.iter().enumerate() {
        out[n / 4][n % 4] = (x / &g).to_i64().expect("small coefficients");
    }
    out
}

/// Congruence diagonalization `Pᵀ S P = diag`; an isotropic vector is returned instead
/// when one turns up.
enum Diagonal {
    Entries(Vec<Rat>),
    Isotropic(Vec<Rat>),
}

fn diagonalize(mut s: Vec<Vec<Rat>>) -> Diagonal {
    let n = s.len();
    // columns of p are the new basis vectors
    let mut p: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let add_to = |s: &mut Vec<Vec<Rat>>, p: &mut Vec<Vec<Rat>>, dst: usize, src: usize, f: &Rat| {
        for r in 0..n {
            let v = &s[r][src] * f;
            s[r][dst] += v;
        }
        for c in 0..n {
            let v = &s[src][c] * f;
            s[dst][c] += v;
        }
        for r in 0..n {
            let v = &p[r][src] * f;
            p[r][dst] += v;
        }
    };
    for k in 0..n {
        if s[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !s[j][j].is_zero()) {
                add_to(&mut s, &mut p, k, j, &Rat::one());
            } else if let Some(j) = (k + 1..n).find(|&j| !s[k][j].is_zero()) {
                add_to(&mut s, &mut p, k, j, &Rat::one());
            } else {
                return Diagonal::Isotropic((0..n).map(|r| p[r][k].clone()).collect());
            }
            if s[k][k].is_zero() {
                // v_k + v_j was isotropic: s_kk + 2 s_kj + s_jj = 0
                return Diagonal::Isotropic((0..n).map(|r| p[r][k].clone()).collect());
            }
        }
        for j in k + 1..n {
            if s[k][j].is_zero() {
                continue;
            }
            let f = -(&s[k][j] / &s[k][k]);
            add_to(&mut s, &mut p, j, k, &f);
        }
    }
    Diagonal::Entries((0..n).map(|i| s[i][i].clone()).collect())
}

fn integral(v: &[Rat]) -> [i64; 4] {
    let mut den = BigInt::one();
    for r in v {
        den = den.lcm(r.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|r| (r * Rat::from(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let mut out = [0i64; 4];
    for (i, x) in ints.iter().enumerate() {
        out[i] = (x / &g).to_i64().expect("small vector");
    }
    out
}

/// Whether `Σ a_i X_i²` (squarefree nonzero `a_i`) has a primitive zero over `Q_p`.
///
/// Splitting the coefficients by divisibility by `p`, a primitive zero has a unit
/// coordinate on the `p`-free part of the form itself or of its swap (`p`-free
/// coefficients times `p`, the others divided by `p`). Such a zero mod `p`
/// (odd `p`) or mod 8 (`p = 2`) lifts by Hensel's lemma.
fn locally_isotropic(diag: &[i64], p: u64) -> bool {
    let pi = p as i64;
    let units: Vec<i64> = diag.iter().copied().filter(|a| a % pi != 0).collect();
    let rest: Vec<i64> = diag.iter().copied().filter(|a| a % pi == 0).map(|a| a / pi).collect();
    let swap_units = rest.clone();
    let swap_rest: Vec<i64> = units.iter().map(|a| a * pi).collect();
    if p == 2 {
        return isotropic_mod_8(&units, &rest) || isotropic_mod_8(&swap_units, &swap_rest);
    }
    unit_form_isotropic_mod_p(&units, p) || unit_form_isotropic_mod_p(&swap_units, p)
}

fn unit_form_isotropic_mod_p(units: &[i64], p: u64) -> bool {
    match units.len() {
        0 | 1 => false,
        2 => legendre(-units[0] * units[1], p) == 1,
        _ => true,
    }
}

fn isotropic_mod_8(units: &[i64], rest: &[i64]) -> bool {
    if units.is_empty() {
        return false;
    }
    let coef: Vec<i64> = units.iter().chain(rest).copied().collect();
    let n = coef.len();
    let total = 8usize.pow(n as u32);
    (0..total).any(|idx| {
        let mut x = vec![0i64; n];
        let mut r = idx;
        for xi in x.iter_mut() {
            *xi = (r % 8) as i64;
            r /= 8;
        }
        x[..units.len()].iter().any(|v| v % 2 == 1)
            && coef.iter().zip(&x).map(|(a, v)| a * v * v).sum::<i64>().rem_euclid(8) == 0
    })
}

/// Zero of `r` with `max(|x1|, |y1|, |x2|) <= height`, solving for `y2`.
fn search_zero(f: &QuaternaryForm, height: u64, budget: u64) -> Option<[i64; 4]> {
    let a = &f.coeffs;
    let a33 = a[3][3] as i128;
    let mut evaluations = 0u64;
    for h in 1..=height as i64 {
        for x1 in -h..=h {
            for y1 in -h..=h {
                for x2 in -h..=h {
                    if x1.abs().max(y1.abs()).max(x2.abs()) != h {
                        continue;
                    }
                    evaluations += 1;
                    if evaluations > budget {
                        return None;
                    }
                    let b = a[0][3] as i128 * x1 as i128
                        + a[1][3] as i128 * y1 as i128
                        + a[2][3] as i128 * x2 as i128;
                    let c = f.eval(&[x1, y1, x2, 0]);
                    let y2 = if a33 == 0 {
                        if b == 0 {
                            (c == 0).then_some(0)
                        } else {
                            (c % b == 0).then(|| -c / b)
                        }
                    } else {
                        let disc = b * b - 4 * a33 * c;
                        if disc < 0 {
                            None
                        } else {
                            let s = isqrt(disc);
                            [s, -s].into_iter().find_map(|s| {
                                (s * s == disc && (s - b) % (2 * a33) == 0)
                                    .then(|| (s - b) / (2 * a33))
                            })
                        }
                    };
                    if let Some(y2) = y2.and_then(|y| i64::try_from(y).ok()) {
                        return Some([x1, y1, x2, y2]);
                    }
                }
            }
        }
    }
    None
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn verified(dd: &DescentDatum, v: [i64; 4]) -> Result<QuaternaryVerdict, OracleError> {
    if v == [0; 4] || !fixed_point_det(dd, &lift(dd.field(), v)).is_zero() {
        return Err(OracleError::SelfCheck(format!(
            "{v:?} is not a fixed point of v -> M*conj(v)"
        )));
    }
    Ok(QuaternaryVerdict::Solution { vector: v })
}

/// Decides whether `σ̄` has a fixed point on `P¹_K`, by definiteness, then local
/// solvability at the primes dividing `2·disc`, then a bounded search.
pub fn quaternary_fixed_point_test(
    dd: &DescentDatum,
    height: u64,
    budget: u64,
) -> Result<QuaternaryVerdict, OracleError> {
    let form = QuaternaryForm::of(dd)?;
    let diag = match diagonalize(form.gram()) {
        Diagonal::Isotropic(v) => return verified(dd, integral(&v)),
        Diagonal::Entries(d) => d,
    };
    if diag.iter().all(|x| x.is_positive()) {
        return Ok(QuaternaryVerdict::NoSolution {
            reason: Obstruction::Definite { positive: true },
        });
    }
    if diag.iter().all(|x| x.is_negative()) {
        return Ok(QuaternaryVerdict::NoSolution {
            reason: Obstruction::Definite { positive: false },
        });
    }
    let classes: Vec<i64> = diag
        .iter()
        .map(|x| squarefree_class(x).expect("nonzero rational"))
        .collect();
    let mut primes: Vec<u64> = vec![2];
    for c in &classes {
        primes.extend(prime_factors(c.unsigned_abs()));
    }
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        if !locally_isotropic(&classes, p) {
            return Ok(QuaternaryVerdict::NoSolution {
                reason: Obstruction::Local { p },
            });
        }
    }
    match search_zero(&form, height, budget) {
        Some(v) => verified(dd, v),
        None => Err(OracleError::Inconclusive(format!(
            "{form} is locally isotropic but no zero was found up to height {height}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test(dd: &DescentDatum) -> QuaternaryVerdict {
        quaternary_fixed_point_test(dd, DEFAULT_QUATERNARY_HEIGHT, DEFAULT_QUATERNARY_BUDGET).unwrap()
    }

    #[test]
    fn documented_forms() {
        let ex = DescentDatum::gaussian_quarter_turn();
        let f = QuaternaryForm::of(&ex).unwrap();
        assert_eq!(f.render(), "x1^2 + y1^2 + x2^2 + y2^2");
        assert_eq!(
            test(&ex),
            QuaternaryVerdict::NoSolution {
                reason: Obstruction::Definite { positive: true }
            }
        );
        let swap = DescentDatum::from_entries(-1, &[["0", "1"], ["1", "0"]]).unwrap();
        assert!(test(&swap).has_solution());
        let real = DescentDatum::from_entries(2, &[["0", "1"], ["-1", "0"]]).unwrap();
        assert!(test(&real).has_solution());
    }

    #[test]
    fn local_tests() {
        assert!(!locally_isotropic(&[1, 1, 1, 1], 2));
        assert!(locally_isotropic(&[1, 1, 1, -1], 2));
        assert!(locally_isotropic(&[1, -1, 3, 3], 3));
        assert!(!locally_isotropic(&[1, -2, 3, -6], 3));
    }
}
