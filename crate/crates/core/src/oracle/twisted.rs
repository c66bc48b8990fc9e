//! Twisted-orbit counting: `|(X/G)(F_q)| = |G|⁻¹ Σ_g #{x : Frob_q(x) = g·x}`.
//!
//! For a linear `g` the solution set of `Frob_q(x) = g·x` is an `F_p`-subspace of
//! `F_{p^D}^n`, so its size is read off the kernel of an `F_p`-linear map.
//! The exhaustive variant tests every point instead.

use serde::Serialize;

use super::ff::{Elem, FpMatrix, GF};
use super::reduce::Reduction;
use super::OracleError;
use crate::exact::rat::{lcm, prime_power};
use crate::exact::{CyclotomicEmbedding, Field, FieldKind, Matrix, DEFAULT_ORDER_BOUND};
use crate::repgroup::GroupAction;

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Which part of `V` is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    Full,
    /// `V ∖ {0}`.
    Punctured,
}

impl Stratum {
    fn contains(&self, gf: &GF, x: &[Elem]) -> bool {
        match self {
            Stratum::Full => true,
            Stratum::Punctured => x.iter().any(|c| !gf.is_zero(c)),
        }
    }

    fn correction(&self) -> u128 {
        match self {
            Stratum::Full => 0,
            Stratum::Punctured => 1,
        }
    }
}

/// One element `v ↦ M·γ(v)` of a group acting semilinearly on `K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearElement {
    pub conj: bool,
    pub matrix: Matrix,
}

struct Setup {
    p: u64,
    /// `q = p^e`
    e: usize,
    red: Reduction,
}

fn residue_degree(k: &Field, p: u64) -> Result<u64, OracleError> {
    let emb = CyclotomicEmbedding::of(k)?;
    emb.residue_degree(p).ok_or_else(|| OracleError::BadReduction {
        p,
        reason: format!("p ramifies in {}", k.name()),
    })
}

fn setup(
    field: &Field,
    base: &Field,
    q: u64,
    group_order: u64,
    exponent: u64,
    degree_factor: u64,
) -> Result<Setup, OracleError> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| OracleError::Invalid(format!("q = {q} is not a prime power")))?;
    if p == 2 {
        return Err(OracleError::BadReduction {
            p,
            reason: "p must be odd".into(),
        });
    }
    if group_order % p == 0 {
        return Err(OracleError::BadReduction {
            p,
            reason: format!("p divides the group order {group_order}"),
        });
    }
    let f = residue_degree(base, p)?;
    if e as u64 % f != 0 {
        return Err(OracleError::Invalid(format!(
            "q = {q} is not a power of the residue field size {p}^{f} of {}",
            base.name()
        )));
    }
    let d = e as u64 * lcm(exponent.max(1), degree_factor);
    let gf = GF::new(p, d as usize);
    let red = Reduction::new(field, gf)?;
    Ok(Setup {
        p,
        e: e as usize,
        red,
    })
}

impl Setup {
    fn frob(&self, x: &Elem) -> Elem {
        let gf = self.red.gf();
        gf.pow(x, (self.p as u128).pow(self.e as u32))
    }

    /// `F_p`-dimension of `{x ∈ F_{p^D}^n : Frob_q(x) = A·x}`.
    fn fixed_dimension(&self, a: &[Vec<Elem>]) -> usize {
        let gf = self.red.gf();
        let n = a.len();
        let dd = gf.degree();
        let frob = gf.linear_map_matrix(|x| self.frob(x));
        let mut big = FpMatrix::zero(self.p, n * dd, n * dd);
        for i in 0..n {
            for j in 0..n {
                let aij = &a[i][j];
                let mut block = gf.linear_map_matrix(|x| gf.neg(&gf.mul(aij, x)));
                if i == j {
                    let mut sum = FpMatrix::zero(self.p, dd, dd);
                    for r in 0..dd {
                        for c in 0..dd {
                            sum.set(r, c, block.get(r, c) + frob.get(r, c));
                        }
                    }
                    block = sum;
                }
                big.put_block(i * dd, j * dd, &block);
            }
        }
        big.kernel().len()
    }

    fn lang_count(&self, a: &[Vec<Elem>], stratum: Stratum) -> Result<u128, OracleError> {
        let kappa = self.fixed_dimension(a);
        if kappa != a.len() * self.e {
            return Err(OracleError::SelfCheck(format!(
                "Frobenius-twisted fixed space has F_p-dimension {kappa}, expected {}",
                a.len() * self.e
            )));
        }
        Ok((self.p as u128).pow(kappa as u32) - stratum.correction())
    }
}

fn average(total: u128, size: u64) -> Result<u128, OracleError> {
    if total % size as u128 != 0 {
        return Err(OracleError::SelfCheck(format!(
            "orbit sum {total} is not divisible by |G| = {size}"
        )));
    }
    Ok(total / size as u128)
}

fn exponent_of(a: &GroupAction) -> u64 {
    a.group().exponent().max(1)
}

/// Number of `F_q`-points of `X/G` for `X = V` or `V ∖ {0}`, via kernels over `F_p`.
pub fn twisted_orbit_count(a: &GroupAction, stratum: Stratum, q: u64) -> Result<u128, OracleError> {
    let k = a.field();
    let s = setup(k, k, q, a.group().size(), exponent_of(a), 1)?;
    let mut total = 0u128;
    for exps in a.group().elements() {
        let g = s.red.reduce_matrix(&a.element(&exps))?;
        total += s.lang_count(&g, stratum)?;
    }
    average(total, a.group().size())
}

/// As [`twisted_orbit_count`], by testing every point of `F_{q^N}^n`.
pub fn twisted_orbit_count_exhaustive(
    a: &GroupAction,
    stratum: Stratum,
    q: u64,
    budget: u128,
) -> Result<u128, OracleError> {
    let k = a.field();
    let s = setup(k, k, q, a.group().size(), exponent_of(a), 1)?;
    let gf = s.red.gf();
    let points = gf.order().checked_pow(a.dim() as u32).unwrap_or(u128::MAX);
    let size = points.saturating_mul(a.group().size() as u128);
    if size > budget {
        return Err(OracleError::TooLarge {
            what: format!("exhaustive twisted count over F_{}^{}", gf.p(), gf.degree()),
            size,
            budget,
        });
    }
    let mats = a
        .group()
        .elements()
        .iter()
        .map(|exps| s.red.reduce_matrix(&a.element(exps)))
        .collect::<Result<Vec<_>, _>>()?;
    let n = a.dim();
    let total = if gf.order() <= TABLE_LIMIT {
        tabulated_exhaustive(&s, &mats, n, stratum)
    } else {
        direct_exhaustive(&s, &mats, n, stratum, points)
    };
    average(total, a.group().size())
}

fn direct_exhaustive(s: &Setup, mats: &[Vec<Vec<Elem>>], n: usize, stratum: Stratum, points: u128) -> u128 {
    let gf = s.red.gf();
    let mut total = 0u128;
    for idx in 0..points {
        let mut rest = idx;
        let x: Vec<Elem> = (0..n)
            .map(|_| {
                let c = gf.from_index(rest % gf.order());
                rest /= gf.order();
                c
            })
            .collect();
        if !stratum.contains(gf, &x) {
            continue;
        }
        let fx: Vec<Elem> = x.iter().map(|c| s.frob(c)).collect();
        for g in mats {
            if apply(gf, g, &x) == fx {
                total += 1;
            }
        }
    }
    total
}

const TABLE_LIMIT: u128 = 1024;

/// The exhaustive loop over element indices with precomputed addition, multiplication and Frobenius tables.
fn tabulated_exhaustive(s: &Setup, mats: &[Vec<Vec<Elem>>], n: usize, stratum: Stratum) -> u128 {
    let gf = s.red.gf();
    let o = gf.order() as usize;
    let elems: Vec<Elem> = (0..o).map(|i| gf.from_index(i as u128)).collect();
    let table = |f: &dyn Fn(&Elem, &Elem) -> Elem| -> Vec<u32> {
        let mut t = vec![0u32; o * o];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                t[i * o + j] = gf.index(&f(x, y)) as u32;
            }
        }
        t
    };
    let add = table(&|x, y| gf.add(x, y));
    let mul = table(&|x, y| gf.mul(x, y));
    let frob: Vec<u32> = elems.iter().map(|x| gf.index(&s.frob(x)) as u32).collect();
    let zero = gf.index(&gf.zero()) as u32;
    let mats: Vec<Vec<u32>> = mats
        .iter()
        .map(|m| m.iter().flatten().map(|e| gf.index(e) as u32).collect())
        .collect();
    let mut x = vec![0u32; n];
    let mut total = 0u128;
    loop {
        let included = match stratum {
            Stratum::Full => true,
            Stratum::Punctured => x.iter().any(|&c| c != zero),
        };
        if included {
            for m in &mats {
                let fixed = (0..n).all(|i| {
                    let gx = (0..n).fold(zero, |acc, j| {
                        add[acc as usize * o + mul[m[i * n + j] as usize * o + x[j] as usize] as usize]
                    });
                    gx == frob[x[i] as usize]
                });
                if fixed {
                    total += 1;
                }
            }
        }
        let Some(pos) = x.iter().position(|&c| (c as usize) + 1 < o) else {
            return total;
        };
        x[pos] += 1;
        x[..pos].iter_mut().for_each(|c| *c = 0);
    }
}

fn apply(gf: &GF, m: &[Vec<Elem>], x: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(gf.zero(), |acc, (a, b)| gf.add(&acc, &gf.mul(a, b)))
        })
        .collect()
}

/// Number of `F_q`-points of `X/G` where `G` acts on `X = A^n_K` (a `k`-scheme)
/// through `K`-semilinear maps.
///
/// A geometric point is a pair `(s, Y)` of a root `s` of the minimal polynomial of
/// the generator of `K/k` and `Y ∈ F̄^n`; `g` sends it to `(γ_g(s), M_g(γ_g(s))·Y)`.
pub fn semilinear_orbit_count(
    ext: &Field,
    elements: &[SemilinearElement],
    stratum: Stratum,
    q: u64,
) -> Result<u128, OracleError> {
    let base = match ext.kind() {
        FieldKind::Quadratic(_) => Field::rational(),
        FieldKind::RelativeQuadratic { base, .. } => base.clone(),
        _ => {
            return Err(OracleError::UnsupportedAction(format!(
                "{} is not a quadratic extension",
                ext.name()
            )))
        }
    };
    // solutions of Y^q = A·Y satisfy Y^(q^r) = Y with r = lcm(ord A, 2·ord(Ā·A))
    let order = |m: &Matrix| {
        m.order(DEFAULT_ORDER_BOUND).ok_or_else(|| {
            OracleError::UnsupportedAction("element of infinite or excessive order".into())
        })
    };
    let mut exponent = 1;
    for el in elements {
        let bar = el.matrix.conj().expect("quadratic extension");
        exponent = lcm(exponent, order(&el.matrix)?);
        exponent = lcm(exponent, 2 * order(&bar.mul(&el.matrix))?);
    }
    let size = elements.len() as u64;
    let s = setup(ext, &base, q, size, exponent, 2)?;
    let roots = s.red.top_roots().expect("quadratic extension").clone();
    let mut total = 0u128;
    for el in elements {
        for (i, root) in roots.iter().enumerate() {
            let moved = if el.conj { &roots[1 - i] } else { root };
            if s.frob(root) != *moved {
                continue;
            }
            let m = s.red.reduce_matrix_at(&el.matrix, Some(moved))?;
            total += s.lang_count(&m, stratum)?;
        }
    }
    average(total, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repgroup::AbelianGroup;

    fn rot() -> GroupAction {
        let q = Field::rational();
        GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]), 4).unwrap()
    }

    #[test]
    fn documented_counts() {
        let q = Field::rational();
        let sign = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]), 2).unwrap();
        assert_eq!(twisted_orbit_count(&sign, Stratum::Full, 3).unwrap(), 9);
        assert_eq!(twisted_orbit_count(&sign, Stratum::Punctured, 3).unwrap(), 8);
        assert_eq!(twisted_orbit_count(&rot(), Stratum::Full, 5).unwrap(), 25);
        assert_eq!(
            twisted_orbit_count_exhaustive(&sign, Stratum::Full, 3, 1_000_000).unwrap(),
            9
        );
        assert_eq!(
            twisted_orbit_count_exhaustive(&sign, Stratum::Punctured, 3, 1_000_000).unwrap(),
            8
        );
    }

    #[test]
    fn tabulated_and_direct_enumeration_agree() {
        let a = rot();
        let s = setup(a.field(), a.field(), 3, 4, exponent_of(&a), 1).unwrap();
        let mats: Vec<_> = a
            .group()
            .elements()
            .iter()
            .map(|e| s.red.reduce_matrix(&a.element(e)).unwrap())
            .collect();
        let points = s.red.gf().order().pow(2);
        for stratum in [Stratum::Full, Stratum::Punctured] {
            assert_eq!(
                tabulated_exhaustive(&s, &mats, 2, stratum),
                direct_exhaustive(&s, &mats, 2, stratum, points)
            );
        }
    }

    #[test]
    fn trivial_group_counts_affine_space() {
        let k = Field::cyclotomic(3).unwrap();
        let a = GroupAction::trivial(&k, 3);
        assert_eq!(twisted_orbit_count(&a, Stratum::Full, 7).unwrap(), 343);
        assert_eq!(AbelianGroup::trivial().size(), 1);
    }

    #[test]
    fn rejects_wrong_residue_field() {
        let k = Field::cyclotomic(4).unwrap();
        let a = GroupAction::trivial(&k, 1);
        assert!(matches!(
            twisted_orbit_count(&a, Stratum::Full, 3),
            Err(OracleError::Invalid(_))
        ));
        assert_eq!(twisted_orbit_count(&a, Stratum::Full, 9).unwrap(), 9);
    }

    #[test]
    fn conjugation_on_the_gaussian_line() {
        let k = Field::quadratic(-1).unwrap();
        let id = Matrix::identity(&k, 1);
        let els = vec![
            SemilinearElement {
                conj: false,
                matrix: id.clone(),
            },
            SemilinearElement {
                conj: true,
                matrix: id,
            },
        ];
        for q in [3, 5, 9] {
            assert_eq!(semilinear_orbit_count(&k, &els, Stratum::Full, q).unwrap(), q as u128);
        }
    }
}
