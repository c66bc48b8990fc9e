//! Finite abelian group actions on `k^n`: validation, characters, eigenspace
//! and irreducible decompositions.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::exact::rat::{lcm, prime_power};
use crate::exact::{
    factor_unity_poly, minimal_polynomial, ExactError, Field, FieldElem, FieldPoly, Matrix,
    DEFAULT_ORDER_BOUND,
};
use crate::exact::matrix::Vector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("k = {field} does not contain the {n}-th roots of 1")]
    RootsOfUnityMissing { n: u64, field: String },
    #[error("the image of G in GL(V) is not cyclic")]
    NonCyclicImage,
    #[error("irreducible factor of dimension {degree} (only 1 and 2 are supported)")]
    UnsupportedDegree { degree: usize },
    #[error("image order {order} is not a prime power")]
    NotPrimePower { order: u64 },
    #[error("no factor carries a faithful action")]
    NoFaithfulFactor,
    #[error("invalid action: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl RepError {
    fn from_exact(e: ExactError) -> RepError {
        match e {
            ExactError::UnsupportedDegree { degree } => RepError::UnsupportedDegree { degree },
            other => RepError::Exact(other),
        }
    }
}

/// `Z/n_1 × … × Z/n_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, RepError> {
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(RepError::Invalid(vec![format!(
                "cyclic factor orders must be >= 2, got {n}"
            )]));
        }
        Ok(AbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroup { orders: vec![n] }
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().copied().fold(1, lcm)
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    /// All exponent vectors, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A group together with one matrix per cyclic generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: AbelianGroup,
    field: Field,
    dim: usize,
    generators: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub image_order: u64,
    pub faithful: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GroupAction {
    /// Builds an action; only shapes and fields are checked here (see [`GroupAction::validate`]).
    pub fn new(
        group: AbelianGroup,
        field: &Field,
        dim: usize,
        generators: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        let mut problems = Vec::new();
        if generators.len() != group.orders.len() {
            problems.push(format!(
                "{} generator matrices for {} cyclic factors",
                generators.len(),
                group.orders.len()
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                problems.push(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                ));
            }
            if g.field() != field {
                problems.push(format!("generator {i} is over {}, expected {field}", g.field()));
            }
        }
        if !problems.is_empty() {
            return Err(RepError::Invalid(problems));
        }
        Ok(GroupAction {
            group,
            field: field.clone(),
            dim,
            generators,
        })
    }

    /// Like [`GroupAction::new`] followed by [`GroupAction::validate`]; violations are fatal.
    pub fn checked(
        group: AbelianGroup,
        field: &Field,
        dim: usize,
        generators: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        let a = Self::new(group, field, dim, generators)?;
        let r = a.validate();
        if !r.is_valid() {
            return Err(RepError::Invalid(r.violations));
        }
        Ok(a)
    }

    /// Cyclic action generated by one matrix of the given order.
    pub fn cyclic(field: &Field, generator: Matrix, order: u64) -> Result<Self, RepError> {
        let dim = generator.rows();
        if order <= 1 {
            return Self::new(AbelianGroup::trivial(), field, dim, vec![]);
        }
        Self::new(AbelianGroup::cyclic(order), field, dim, vec![generator])
    }

    pub fn trivial(field: &Field, dim: usize) -> Self {
        GroupAction {
            group: AbelianGroup::trivial(),
            field: field.clone(),
            dim,
            generators: vec![],
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, (g, &n)) in self.generators.iter().zip(&self.group.orders).enumerate() {
            if g.det().is_zero() {
                violations.push(format!("generator {i} is not invertible"));
            } else if !g.pow(n).is_identity() {
                violations.push(format!("generator {i} does not satisfy g^{n} = 1"));
            }
        }
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let (a, b) = (&self.generators[i], &self.generators[j]);
                if a.mul(b) != b.mul(a) {
                    violations.push(format!("generators {i} and {j} do not commute"));
                }
            }
        }
        let image_order = if violations.is_empty() {
            self.image().len() as u64
        } else {
            0
        };
        ValidationReport {
            faithful: violations.is_empty() && image_order == self.group.size(),
            violations,
            image_order,
        }
    }

    /// The matrix of the group element with the given exponent vector.
    pub fn element(&self, exps: &[u64]) -> Matrix {
        let mut m = Matrix::identity(&self.field, self.dim);
        for (g, &e) in self.generators.iter().zip(exps) {
            m = m.mul(&g.pow(e));
        }
        m
    }

    /// Distinct matrices in the image of G, in order of first appearance.
    pub fn image(&self) -> Vec<Matrix> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in self.group.elements() {
            let m = self.element(&e);
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
        out
    }

    /// A generator of the image, when the image is cyclic.
    pub fn image_generator(&self) -> Result<(Matrix, u64), RepError> {
        let img = self.image();
        let n = img.len() as u64;
        for m in &img {
            if m.order(n) == Some(n) {
                return Ok((m.clone(), n));
            }
        }
        Err(RepError::NonCyclicImage)
    }

    /// The cyclic action `Z/|image|` through the image generator.
    pub fn cyclic_image(&self) -> Result<GroupAction, RepError> {
        let (g, n) = self.image_generator()?;
        GroupAction::cyclic(&self.field, g, n)
    }

    /// The restricted action on an invariant subspace, in the given basis.
    pub fn restrict(&self, basis: &[Vector]) -> Result<GroupAction, RepError> {
        let gens: Option<Vec<Matrix>> = self.generators.iter().map(|g| g.restrict(basis)).collect();
        let gens = gens.ok_or_else(|| RepError::Invalid(vec!["subspace is not invariant".into()]))?;
        GroupAction::new(self.group.clone(), &self.field, basis.len(), gens)
    }

    /// Same group and matrices, with every generator replaced by `P⁻¹ g P`.
    pub fn conjugate_by(&self, p: &Matrix) -> Result<GroupAction, RepError> {
        let inv = p
            .inverse()
            .ok_or_else(|| RepError::Invalid(vec!["change of basis is singular".into()]))?;
        let gens = self.generators.iter().map(|g| inv.mul(g).mul(p)).collect();
        GroupAction::new(self.group.clone(), &self.field, self.dim, gens)
    }
}

/// A character `χ` of `Z/n_1 × … × Z/n_r`, `χ(g_i) = ζ_{n_i}^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub exponents: Vec<u64>,
    /// Realized values `χ(g_i) ∈ k`, when `μ_N ⊂ k`.
    pub values: Option<Vec<FieldElem>>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(|x| x.to_string()).collect();
        write!(f, "chi({})", e.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub entries: Vec<(Character, Vec<Vector>)>,
}

impl EigenDecomposition {
    /// Dimensions of the nonzero eigenspaces, in entry order.
    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, b)| b.len()).collect()
    }
}

/// Row-reduced basis of a span, each vector with leading coordinate 1.
pub fn normalized_basis(field: &Field, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return vec![];
    }
    let m = Matrix::from_rows(field, vectors.to_vec()).expect("equal-length vectors");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// The fixed primitive `n`-th root of unity used for character values.
pub fn character_root(k: &Field, n: u64) -> Option<FieldElem> {
    k.primitive_root_of_unity(n)
}

/// Simultaneous eigenspaces of all generators, indexed by characters in lexicographic order.
pub fn character_eigenspaces(a: &GroupAction) -> Result<EigenDecomposition, RepError> {
    let k = &a.field;
    let n = a.group.exponent();
    if !k.contains_nth_roots(n) {
        return Err(RepError::RootsOfUnityMissing {
            n,
            field: k.name(),
        });
    }
    let roots: Vec<FieldElem> = a
        .group
        .orders
        .iter()
        .map(|&ni| character_root(k, ni).expect("μ_N ⊂ k"))
        .collect();
    let mut entries = Vec::new();
    let mut total = 0;
    for exps in a.group.elements() {
        let values: Vec<FieldElem> = exps
            .iter()
            .zip(&roots)
            .map(|(&e, z)| z.pow(e as i64))
            .collect();
        let mut stacked: Vec<Vector> = Vec::new();
        for (g, v) in a.generators.iter().zip(&values) {
            let shifted = g.sub(&Matrix::identity(k, a.dim).scale(v));
            stacked.extend(shifted.to_rows());
        }
        let basis = if stacked.is_empty() {
            (0..a.dim)
                .map(|i| {
                    let mut e = vec![k.zero(); a.dim];
                    e[i] = k.one();
                    e
                })
                .collect()
        } else {
            let m = Matrix::from_rows(k, stacked).expect("rectangular");
            normalized_basis(k, &m.nullspace())
        };
        if basis.is_empty() {
            continue;
        }
        total += basis.len();
        entries.push((
            Character {
                exponents: exps,
                values: Some(values),
            },
            basis,
        ));
    }
    if total != a.dim {
        // only possible for invalid actions
        return Err(RepError::Invalid(vec![
            "generators are not simultaneously diagonalizable".into(),
        ]));
    }
    Ok(EigenDecomposition { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleFactor {
    /// Basis of the invariant subspace; for dimension 2 it is `(v, g·v)`.
    pub basis: Vec<Vector>,
    /// Minimal polynomial of the image generator restricted to the factor.
    pub min_poly: FieldPoly,
    pub dim: usize,
    /// Index of the isomorphism class (factors with equal minimal polynomial).
    pub iso_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleDecomposition {
    /// Generator of the (cyclic) image and its order.
    pub generator: Matrix,
    pub image_order: u64,
    pub factors: Vec<IrreducibleFactor>,
}

impl IrreducibleDecomposition {
    /// Number of factors in each isomorphism class.
    pub fn multiplicities(&self) -> Vec<usize> {
        let classes = self.factors.iter().map(|f| f.iso_class).max().map_or(0, |m| m + 1);
        let mut out = vec![0; classes];
        for f in &self.factors {
            out[f.iso_class] += 1;
        }
        out
    }

    /// The generator restricted to factor `i`, in that factor's basis.
    pub fn restricted_generator(&self, i: usize) -> Matrix {
        self.generator
            .restrict(&self.factors[i].basis)
            .expect("factor is invariant")
    }
}

fn leading_index(basis: &[Vector]) -> usize {
    basis
        .iter()
        .filter_map(|v| v.iter().position(|x| !x.is_zero()))
        .min()
        .unwrap_or(usize::MAX)
}

/// Splits `V` into irreducible invariant subspaces of dimension 1 or 2 under a cyclic image.
pub fn irreducible_decomposition(a: &GroupAction) -> Result<IrreducibleDecomposition, RepError> {
    let k = &a.field;
    let (g, order) = a.image_generator()?;
    let minpoly = minimal_polynomial(&g, DEFAULT_ORDER_BOUND.max(order)).map_err(RepError::from_exact)?;
    let factors = factor_unity_poly(&minpoly, DEFAULT_ORDER_BOUND.max(order))
        .map_err(RepError::from_exact)?;
    let mut out: Vec<IrreducibleFactor> = Vec::new();
    for (class, (f, _)) in factors.iter().enumerate() {
        let deg = f.degree().unwrap();
        let kernel = normalized_basis(k, &f.eval_matrix(&g).nullspace());
        if deg == 1 {
            for v in kernel {
                out.push(IrreducibleFactor {
                    basis: vec![v],
                    min_poly: f.clone(),
                    dim: 1,
                    iso_class: class,
                });
            }
            continue;
        }
        let mut span: Vec<Vector> = Vec::new();
        for v in &kernel {
            let mut trial = span.clone();
            trial.push(v.clone());
            if Matrix::from_rows(k, trial).unwrap().rank() == span.len() {
                continue;
            }
            let gv = g.mul_vec(v);
            span.push(v.clone());
            span.push(gv.clone());
            out.push(IrreducibleFactor {
                basis: vec![v.clone(), gv],
                min_poly: f.clone(),
                dim: 2,
                iso_class: class,
            });
            if span.len() == kernel.len() {
                break;
            }
        }
    }
    out.sort_by_key(|f| leading_index(&f.basis));
    Ok(IrreducibleDecomposition {
        generator: g,
        image_order: order,
        factors: out,
    })
}

/// Least index of a factor on which the cyclic image acts faithfully.
pub fn faithful_factor(d: &IrreducibleDecomposition) -> Result<usize, RepError> {
    let n = d.image_order;
    if n > 1 && prime_power(n).is_none() {
        return Err(RepError::NotPrimePower { order: n });
    }
    for i in 0..d.factors.len() {
        if d.restricted_generator(i).order(n) == Some(n) {
            return Ok(i);
        }
    }
    Err(RepError::NoFaithfulFactor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(q: &Field) -> Matrix {
        Matrix::from_ints(q, &[&[0, -1], &[1, 0]])
    }

    #[test]
    fn validation_examples() {
        let q = Field::rational();
        let a = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]), 2).unwrap();
        let r = a.validate();
        assert!(r.is_valid() && r.faithful && r.image_order == 2);
        let b = GroupAction::cyclic(&q, rot(&q), 4).unwrap();
        assert_eq!(b.validate().image_order, 4);
        let c = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, 1]]), 4).unwrap();
        let r = c.validate();
        assert!(r.is_valid() && !r.faithful && r.image_order == 2);
        let bad = GroupAction::cyclic(&q, rot(&q), 3).unwrap();
        assert!(!bad.validate().is_valid());
    }

    #[test]
    fn rotation_eigenspaces_over_gaussian_field() {
        let k = Field::cyclotomic(4).unwrap();
        let z = k.generator();
        let a = GroupAction::cyclic(&k, rot(&k), 4).unwrap();
        let d = character_eigenspaces(&a).unwrap();
        assert_eq!(d.entries.len(), 2);
        assert_eq!(d.entries[0].0.values.as_ref().unwrap()[0], z);
        assert_eq!(d.entries[0].1, vec![vec![k.one(), -z.clone()]]);
        assert_eq!(d.entries[1].0.values.as_ref().unwrap()[0], -z.clone());
        assert_eq!(d.entries[1].1, vec![vec![k.one(), z.clone()]]);
        let q = Field::rational();
        let b = GroupAction::cyclic(&q, rot(&q), 4).unwrap();
        assert!(matches!(
            character_eigenspaces(&b),
            Err(RepError::RootsOfUnityMissing { n: 4, .. })
        ));
    }

    #[test]
    fn decomposition_and_faithful_factor() {
        let q = Field::rational();
        let sign = Matrix::from_ints(&q, &[&[-1]]);
        let g = Matrix::direct_sum(&[sign, rot(&q)]);
        let a = GroupAction::cyclic(&q, g, 4).unwrap();
        let d = irreducible_decomposition(&a).unwrap();
        let dims: Vec<usize> = d.factors.iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![1, 2]);
        assert_eq!(faithful_factor(&d).unwrap(), 1);

        let g2 = Matrix::direct_sum(&[rot(&q), rot(&q)]);
        let a2 = GroupAction::cyclic(&q, g2, 4).unwrap();
        let d2 = irreducible_decomposition(&a2).unwrap();
        assert_eq!(d2.factors.len(), 2);
        assert!(d2.factors.iter().all(|f| f.min_poly.to_string() == "T^2 + 1"));
        assert_eq!(d2.multiplicities(), vec![2]);
    }
}
