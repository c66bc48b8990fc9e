//! Monomial invariant rings of diagonal cyclic actions, and point counts of the
//! resulting binomial presentations over small finite fields.

use std::fmt;

use serde::Serialize;

use super::ff::GF;
use super::OracleError;
use crate::exact::rat::prime_power;
use crate::repgroup::GroupAction;

const NAMES: [&str; 6] = ["u", "v", "w", "r", "s", "t"];
const COORDS: [&str; 2] = ["x", "y"];

/// `∏ g_i^lhs_i = ∏ g_i^rhs_i` in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

fn render_monomial(exps: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl Binomial {
    pub fn render(&self, names: &[String]) -> String {
        format!(
            "{} = {}",
            render_monomial(&self.lhs, names),
            render_monomial(&self.rhs, names)
        )
    }
}

/// Generators and binomial relations of `k[x_1..x_m]^G` for `G = Z/n` acting by
/// `x_i ↦ ζ^{w_i} x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantPresentation {
    pub order: u64,
    pub weights: Vec<u64>,
    /// Exponent vectors of the generating monomials in the coordinates.
    pub generators: Vec<Vec<u32>>,
    pub names: Vec<String>,
    pub relations: Vec<Binomial>,
}

impl InvariantPresentation {
    /// Monomials in the coordinates, e.g. `x^2, y^2, x*y`.
    pub fn render_generators(&self) -> String {
        let coords: Vec<String> = COORDS.iter().map(|s| s.to_string()).collect();
        self.generators
            .iter()
            .map(|g| render_monomial(g, &coords))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn render_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.render(&self.names)).collect()
    }
}

impl fmt::Display for InvariantPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .names
            .iter()
            .zip(&self.generators)
            .map(|(n, g)| {
                let coords: Vec<String> = COORDS.iter().map(|s| s.to_string()).collect();
                format!("{n} = {}", render_monomial(g, &coords))
            })
            .collect();
        write!(f, "generators: {}", names.join(", "))?;
        let rels = self.render_relations();
        if rels.is_empty() {
            write!(f, "; relations: none")
        } else {
            write!(f, "; relations: {}", rels.join(", "))
        }
    }
}

fn exponent_vectors(dim: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=max_degree - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sort_key(e: &[u32]) -> (u8, u32, Vec<std::cmp::Reverse<u32>>) {
    let support = e.iter().filter(|&&x| x > 0).count();
    let class = if support == 1 {
        e.iter().position(|&x| x > 0).unwrap() as u8
    } else {
        e.len() as u8
    };
    (
        class,
        e.iter().sum(),
        e.iter().map(|&x| std::cmp::Reverse(x)).collect(),
    )
}

/// Presentation for `Z/n` acting on coordinates with the given weights.
pub fn invariant_presentation_from_weights(
    order: u64,
    weights: &[u64],
) -> Result<InvariantPresentation, OracleError> {
    if weights.is_empty() || weights.len() > 2 {
        return Err(OracleError::UnsupportedAction(format!(
            "dimension {} (only 1 and 2 are supported)",
            weights.len()
        )));
    }
    if !(1..=6).contains(&order) {
        return Err(OracleError::UnsupportedAction(format!(
            "group order {order} (at most 6 is supported)"
        )));
    }
    let n = order as u32;
    let weights: Vec<u64> = weights.iter().map(|w| w % order).collect();
    let invariant = |e: &[u32]| {
        e.iter()
            .zip(&weights)
            .map(|(&a, &w)| a as u64 * w)
            .sum::<u64>()
            % order
            == 0
    };
    let nonzero: Vec<Vec<u32>> = exponent_vectors(weights.len(), n)
        .into_iter()
        .filter(|e| e.iter().any(|&x| x > 0) && invariant(e))
        .collect();
    let mut generators: Vec<Vec<u32>> = nonzero
        .iter()
        .filter(|e| {
            !nonzero.iter().any(|a| {
                a != *e
                    && a.iter().zip(e.iter()).all(|(x, y)| x <= y)
                    && nonzero.contains(&e.iter().zip(a).map(|(y, x)| y - x).collect())
            })
        })
        .cloned()
        .collect();
    generators.sort_by_key(|e| sort_key(e));
    let names: Vec<String> = (0..generators.len())
        .map(|i| {
            NAMES
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("g{i}"))
        })
        .collect();
    // binomials with disjoint supports, up to generator degree n
    let m = generators.len();
    let words = exponent_vectors(m, n);
    let image = |w: &[u32]| {
        w.iter()
            .zip(&generators)
            .fold(vec![0u32; weights.len()], |acc, (&c, g)| {
                add(&acc, &g.iter().map(|x| x * c).collect::<Vec<_>>())
            })
    };
    let mut candidates: Vec<Binomial> = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for b in &words[..i] {
            let disjoint = a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0);
            if disjoint && a.iter().any(|&x| x > 0) && b.iter().any(|&x| x > 0) && image(a) == image(b) {
                let (lhs, rhs) = if first_index(a) <= first_index(b) {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                };
                candidates.push(Binomial { lhs, rhs });
            }
        }
    }
    candidates.sort_by_key(|r| (r.lhs.iter().sum::<u32>() + r.rhs.iter().sum::<u32>(), r.lhs.clone()));
    let mut relations: Vec<Binomial> = Vec::new();
    for r in candidates {
        let implied = relations.iter().any(|k| {
            let le = |x: &[u32], y: &[u32]| x.iter().zip(y).all(|(a, b)| a <= b);
            (le(&k.lhs, &r.lhs) && le(&k.rhs, &r.rhs)) || (le(&k.lhs, &r.rhs) && le(&k.rhs, &r.lhs))
        });
        if !implied {
            relations.push(r);
        }
    }
    Ok(InvariantPresentation {
        order,
        weights,
        generators,
        names,
        relations,
    })
}

/// The side mentioning the earliest generator goes left.
fn first_index(w: &[u32]) -> usize {
    w.iter().position(|&x| x > 0).unwrap_or(w.len())
}

/// Presentation of `k[V]^G` for a diagonal cyclic action whose entries are roots of unity in `k`.
pub fn invariant_presentation(a: &GroupAction) -> Result<InvariantPresentation, OracleError> {
    let unsupported = |m: &str| Err(OracleError::UnsupportedAction(m.into()));
    if a.group().orders().len() != 1 {
        return unsupported("only cyclic group presentations are supported");
    }
    let g = &a.generators()[0];
    if !g.is_diagonal() {
        return unsupported("the generator is not diagonal");
    }
    let n = a.group().orders()[0];
    let Some(zeta) = a.field().primitive_root_of_unity(n) else {
        return Err(OracleError::UnsupportedAction(format!(
            "{} lacks the {n}-th roots of 1",
            a.field().name()
        )));
    };
    let mut weights = Vec::new();
    for i in 0..a.dim() {
        let entry = g.get(i, i);
        let Some(w) = (0..n).find(|&w| &zeta.pow(w as i64) == entry) else {
            return unsupported("diagonal entry is not an n-th root of 1");
        };
        weights.push(w);
    }
    invariant_presentation_from_weights(n, &weights)
}

/// Number of points of the binomial system in `F_q^m`.
pub fn count_affine_points(
    relations: &[Binomial],
    ambient: usize,
    q: u64,
    budget: u128,
) -> Result<u128, OracleError> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| OracleError::Invalid(format!("q = {q} is not a prime power")))?;
    if q > 81 {
        return Err(OracleError::Invalid(format!("q = {q} exceeds 81")));
    }
    let size = (q as u128).pow(ambient as u32);
    if size > budget {
        return Err(OracleError::TooLarge {
            what: format!("enumeration of F_{q}^{ambient}"),
            size,
            budget,
        });
    }
    if relations.iter().any(|r| r.lhs.len() != ambient || r.rhs.len() != ambient) {
        return Err(OracleError::Invalid("relation arity differs from the ambient dimension".into()));
    }
    let gf = GF::new(p, e as usize);
    let qs = q as usize;
    let mul: Vec<usize> = (0..qs * qs)
        .map(|ij| {
            let (i, j) = (ij / qs, ij % qs);
            gf.index(&gf.mul(&gf.from_index(i as u128), &gf.from_index(j as u128))) as usize
        })
        .collect();
    let max_exp = relations
        .iter()
        .flat_map(|r| r.lhs.iter().chain(&r.rhs))
        .copied()
        .max()
        .unwrap_or(0) as usize;
    // powers[x][k] = x^k
    let powers: Vec<Vec<usize>> = (0..qs)
        .map(|x| {
            let mut row = vec![1usize];
            for k in 1..=max_exp {
                row.push(mul[row[k - 1] * qs + x]);
            }
            row
        })
        .collect();
    let eval = |exps: &[u32], pt: &[usize]| {
        exps.iter()
            .zip(pt)
            .fold(1usize, |acc, (&k, &x)| mul[acc * qs + powers[x][k as usize]])
    };
    let mut count = 0u128;
    let mut pt = vec![0usize; ambient];
    for _ in 0..size {
        if relations.iter().all(|r| eval(&r.lhs, &pt) == eval(&r.rhs, &pt)) {
            count += 1;
        }
        for c in pt.iter_mut() {
            *c += 1;
            if *c < qs {
                break;
            }
            *c = 0;
        }
    }
    Ok(count)
}
