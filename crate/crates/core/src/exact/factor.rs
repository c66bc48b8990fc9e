//! Factoring divisors of `T^N - 1` over the supported fields, and minimal
//! polynomials of finite-order matrices.

use super::embed::{zeta_power, CyclotomicEmbedding};
use super::field::Field;
use super::fpoly::FieldPoly;
use super::matrix::Matrix;
use super::poly::cyclotomic_poly;
use super::rat::{divisors, gcd, lcm};
use super::ExactError;

pub const DEFAULT_ORDER_BOUND: u64 = 64;

/// Whether `μ_n ⊂ k`.
pub fn contains_nth_roots(k: &Field, n: u64) -> bool {
    k.contains_nth_roots(n)
}

/// Least `N <= bound` with `p | T^N - 1`.
pub fn unity_order(p: &FieldPoly, bound: u64) -> Result<u64, ExactError> {
    let k = p.field();
    for n in 1..=bound {
        let mut t_n = vec![k.zero(); n as usize + 1];
        t_n[0] = k.from_int(-1);
        t_n[n as usize] = k.one();
        if FieldPoly::new(k, t_n).rem(p).is_zero() {
            return Ok(n);
        }
    }
    Err(ExactError::OrderBoundExceeded { bound })
}

/// Monic irreducible factors of `Φ_d` over `k`, each of degree `[k(ζ_d):k]`.
///
/// Roots `ζ_d^j` are grouped into orbits under the Galois group of `Q(ζ)/k`;
/// factors are listed by the least exponent `j` in their orbit.
pub fn cyclotomic_factors(k: &Field, d: u64) -> Result<Vec<FieldPoly>, ExactError> {
    if k.is_rational() {
        return Ok(vec![FieldPoly::from_rational(k, &cyclotomic_poly(d))]);
    }
    let emb = CyclotomicEmbedding::of(k)?;
    let l2 = lcm(emb.level(), d);
    let amb = Field::cyclotomic(l2)?;
    let h = emb.lifted_fixing(l2);
    let mut seen = vec![false; d as usize];
    let mut out = Vec::new();
    for j in 1..=d.max(1) {
        let j = j % d;
        if gcd(j, d) != 1 || seen[j as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = h.iter().map(|a| a * j % d).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &o in &orbit {
            seen[o as usize] = true;
        }
        let mut f = FieldPoly::one(&amb);
        for &o in &orbit {
            f = f.mul(&FieldPoly::linear(&zeta_power(&amb, l2, l2 / d * o)));
        }
        let coeffs: Option<Vec<_>> = f
            .coeffs()
            .iter()
            .map(|c| emb.pull_back_lifted(c, l2))
            .collect();
        let coeffs = coeffs.expect("orbit product has coefficients in k");
        out.push(FieldPoly::new(k, coeffs));
    }
    Ok(out)
}

/// Complete factorization of a divisor of `T^N - 1` into monic irreducibles over `k`.
///
/// Factors of degree above 2 are rejected with `UnsupportedDegree`.
pub fn factor_unity_poly(
    p: &FieldPoly,
    bound: u64,
) -> Result<Vec<(FieldPoly, usize)>, ExactError> {
    let k = p.field().clone();
    let n = unity_order(p, bound)?;
    let mut rest = p.monic();
    let mut out = Vec::new();
    for d in divisors(n) {
        for f in cyclotomic_factors(&k, d)? {
            let mut mult = 0;
            loop {
                let (q, r) = rest.divrem(&f);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                let deg = f.degree().unwrap();
                if deg > 2 {
                    return Err(ExactError::UnsupportedDegree { degree: deg });
                }
                out.push((f, mult));
            }
        }
    }
    debug_assert_eq!(rest.degree(), Some(0));
    Ok(out)
}

/// Monic minimal polynomial of a square matrix of finite order.
pub fn minimal_polynomial(m: &Matrix, bound: u64) -> Result<FieldPoly, ExactError> {
    if !m.is_square() {
        return Err(ExactError::DimensionMismatch("minimal polynomial of a non-square matrix".into()));
    }
    m.order(bound)
        .ok_or(ExactError::NotFiniteOrder { bound })?;
    let k = m.field().clone();
    let n = m.rows();
    let mut acc = FieldPoly::one(&k);
    for i in 0..n {
        let mut e = vec![k.zero(); n];
        e[i] = k.one();
        let local = krylov_annihilator(m, e);
        let g = acc.gcd(&local);
        acc = acc.mul(&local).divrem(&g).0;
    }
    Ok(acc.monic())
}

/// Monic least-degree `f` with `f(m)·v = 0`.
fn krylov_annihilator(m: &Matrix, v: Vec<super::field::FieldElem>) -> FieldPoly {
    let k = m.field().clone();
    let mut seq = vec![v];
    loop {
        let next = m.mul_vec(seq.last().unwrap());
        let basis = Matrix::from_columns(&k, &seq);
        if let Some(x) = basis.solve(&next) {
            let mut cs: Vec<_> = x.into_iter().map(|c| -c).collect();
            cs.push(k.one());
            return FieldPoly::new(&k, cs);
        }
        seq.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::UniPoly;

    fn rp(k: &Field, cs: &[i64]) -> FieldPoly {
        FieldPoly::from_rational(k, &UniPoly::from_ints(cs))
    }

    #[test]
    fn t4_minus_1_over_q() {
        let q = Field::rational();
        let f = factor_unity_poly(&rp(&q, &[-1, 0, 0, 0, 1]), 64).unwrap();
        let shown: Vec<String> = f.iter().map(|(p, _)| p.to_string()).collect();
        assert_eq!(shown, vec!["T - 1", "T + 1", "T^2 + 1"]);
    }

    #[test]
    fn t2_plus_1_over_gaussian() {
        let k = Field::cyclotomic(4).unwrap();
        let z = k.generator();
        let f = factor_unity_poly(&rp(&k, &[1, 0, 1]), 64).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0, FieldPoly::linear(&z));
        assert_eq!(f[1].0, FieldPoly::linear(&-z));
    }

    #[test]
    fn phi5_too_big_over_q() {
        let q = Field::rational();
        let r = factor_unity_poly(&rp(&q, &[1, 1, 1, 1, 1]), 64);
        assert_eq!(r, Err(ExactError::UnsupportedDegree { degree: 4 }));
        let k = Field::quadratic(5).unwrap();
        let f = factor_unity_poly(&rp(&k, &[1, 1, 1, 1, 1]), 64).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn minimal_polynomials() {
        let q = Field::rational();
        assert_eq!(
            minimal_polynomial(&Matrix::identity(&q, 2), 64).unwrap().to_string(),
            "T - 1"
        );
        let r = Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]);
        assert_eq!(minimal_polynomial(&r, 64).unwrap().to_string(), "T^2 + 1");
        let m = Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]);
        assert_eq!(minimal_polynomial(&m, 64).unwrap().to_string(), "T + 1");
        let big = Matrix::from_ints(&q, &[&[2, 0], &[0, 1]]);
        assert!(matches!(
            minimal_polynomial(&big, 64),
            Err(ExactError::NotFiniteOrder { .. })
        ));
    }
}
