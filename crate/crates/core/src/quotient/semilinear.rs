//! Actions of `G` on `V = K^n` through `K`-semilinear maps, `K = k(√e)`, viewed
//! as a `k`-linear action on `V` as a `k`-space of dimension `2n`.
//!
//! Each element acts as `v ↦ M_g·γ_g(v)` where `γ_g` is the image of `g` under
//! `ρ: G → Gal(K/k)`. The kernel `H` of `ρ` acts `K`-linearly.

use super::split::record_strata;
use super::{expect_lefschetz_power, Derived, QuotientError};
use crate::exact::matrix::Vector;
use crate::exact::rat::{rat, squarefree};
use crate::exact::{Field, FieldElem, FieldKind, Matrix};
use crate::kring::{DerivationTrace, KExpr};
use crate::oracle::SemilinearElement;
use crate::repgroup::{character_root, normalized_basis, AbelianGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearAction {
    base: Field,
    /// `K = k(√e)`, or `None` when `K = k`.
    e: Option<i64>,
    ext: Field,
    group: AbelianGroup,
    /// Whether each generator acts through the nontrivial element of `Gal(K/k)`.
    rho: Vec<bool>,
    generators: Vec<Matrix>,
    dim: usize,
}

/// A subspace of `V` over `K` on which `H` acts through one character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HEigenspace {
    /// Values of the character on the elements of `H`, in enumeration order.
    pub values: Vec<FieldElem>,
    pub basis: Vec<Vector>,
}

fn violated(msg: impl Into<String>) -> QuotientError {
    QuotientError::SemilinearityViolated(msg.into())
}

impl SemilinearAction {
    /// Builds and validates an action given by `K`-matrices `M_g` and `ρ` on generators.
    pub fn new(
        base: &Field,
        e: Option<i64>,
        group: AbelianGroup,
        rho: Vec<bool>,
        generators: Vec<Matrix>,
    ) -> Result<SemilinearAction, QuotientError> {
        let ext = match e {
            None => base.clone(),
            Some(e) => {
                if e == 0 || squarefree(e) != e {
                    return Err(violated(format!("e = {e} must be a nonzero squarefree integer")));
                }
                if base.is_rational() {
                    Field::quadratic(e)?
                } else {
                    Field::relative_quadratic(base, rat(0), rat(-e))?
                }
            }
        };
        if rho.len() != group.orders().len() || generators.len() != group.orders().len() {
            return Err(violated(format!(
                "{} cyclic factors, {} Galois images, {} matrices",
                group.orders().len(),
                rho.len(),
                generators.len()
            )));
        }
        if e.is_none() && rho.iter().any(|&r| r) {
            return Err(violated("a generator acts through Galois but K = k"));
        }
        if e.is_some() && !rho.iter().any(|&r| r) {
            return Err(violated("G -> Gal(K/k) is not surjective"));
        }
        let dim = generators.first().map_or(0, |m| m.rows());
        for (i, m) in generators.iter().enumerate() {
            if m.field() != &ext || m.rows() != dim || m.cols() != dim {
                return Err(violated(format!(
                    "generator {i} must be a {dim}x{dim} matrix over {}",
                    ext.name()
                )));
            }
            if m.det().is_zero() {
                return Err(violated(format!("generator {i} is not invertible")));
            }
        }
        let s = SemilinearAction {
            base: base.clone(),
            e,
            ext,
            group,
            rho,
            generators,
            dim,
        };
        s.check_relations()?;
        Ok(s)
    }

    /// Builds an action from `k`-matrices of size `2n` in the `k`-basis
    /// `(b_1, …, b_n, √e·b_1, …, √e·b_n)`, checking `A·J = ±J·A` for the
    /// multiplication `J` by `√e`, with sign `-` exactly when `ρ(g)` is nontrivial.
    pub fn from_k_linear(
        base: &Field,
        e: i64,
        group: AbelianGroup,
        rho: Vec<bool>,
        k_matrices: Vec<Matrix>,
    ) -> Result<SemilinearAction, QuotientError> {
        let two_n = k_matrices.first().map_or(0, |m| m.rows());
        if two_n % 2 != 0 {
            return Err(violated("k-dimension must be even"));
        }
        let n = two_n / 2;
        let mut j = Matrix::zero(base, two_n, two_n);
        for i in 0..n {
            j.set(n + i, i, base.one());
            j.set(i, n + i, base.from_int(e));
        }
        let ext = if base.is_rational() {
            Field::quadratic(e)?
        } else {
            Field::relative_quadratic(base, rat(0), rat(-e))?
        };
        let sqrt_e = ext.relative_generator().unwrap_or_else(|| ext.generator());
        let lift = |x: &FieldElem| -> FieldElem {
            if base.is_rational() {
                ext.from_rat(x.as_rational().expect("rational"))
            } else {
                ext.embed_base(x)
            }
        };
        let mut generators = Vec::new();
        for (idx, (a, &conj)) in k_matrices.iter().zip(&rho).enumerate() {
            if a.field() != base || a.rows() != two_n || a.cols() != two_n {
                return Err(violated(format!("matrix {idx} must be {two_n}x{two_n} over {base}")));
            }
            let aj = a.mul(&j);
            let ja = j.mul(a);
            let ok = if conj { aj == ja.neg() } else { aj == ja };
            if !ok {
                return Err(violated(format!(
                    "matrix {idx} does not satisfy A(sqrt({e})v) = {}sqrt({e})A(v)",
                    if conj { "-" } else { "" }
                )));
            }
            let mut m = Matrix::zero(&ext, n, n);
            for r in 0..n {
                for c in 0..n {
                    let v = lift(a.get(r, c)) + sqrt_e.clone() * lift(a.get(n + r, c));
                    m.set(r, c, v);
                }
            }
            generators.push(m);
        }
        SemilinearAction::new(base, Some(e), group, rho, generators)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn e(&self) -> Option<i64> {
        self.e
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// `dim_K V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn conj_matrix(&self, m: &Matrix) -> Matrix {
        if self.e.is_some() {
            m.conj().expect("quadratic extension")
        } else {
            m.clone()
        }
    }

    fn conj_vec(&self, v: &[FieldElem]) -> Vector {
        if self.e.is_some() {
            v.iter().map(|x| x.conj().expect("quadratic extension")).collect()
        } else {
            v.to_vec()
        }
    }

    fn compose(&self, a: &SemilinearElement, b: &SemilinearElement) -> SemilinearElement {
        let mb = if a.conj { self.conj_matrix(&b.matrix) } else { b.matrix.clone() };
        SemilinearElement {
            conj: a.conj ^ b.conj,
            matrix: a.matrix.mul(&mb),
        }
    }

    fn identity(&self) -> SemilinearElement {
        SemilinearElement {
            conj: false,
            matrix: Matrix::identity(&self.ext, self.dim),
        }
    }

    fn generator(&self, i: usize) -> SemilinearElement {
        SemilinearElement {
            conj: self.rho[i],
            matrix: self.generators[i].clone(),
        }
    }

    fn power(&self, g: &SemilinearElement, n: u64) -> SemilinearElement {
        (0..n).fold(self.identity(), |acc, _| self.compose(&acc, g))
    }

    fn check_relations(&self) -> Result<(), QuotientError> {
        for (i, &n) in self.group.orders().iter().enumerate() {
            let p = self.power(&self.generator(i), n);
            if p.conj || !p.matrix.is_identity() {
                return Err(violated(format!("generator {i} does not satisfy g^{n} = 1")));
            }
        }
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                let (a, b) = (self.generator(i), self.generator(j));
                if self.compose(&a, &b) != self.compose(&b, &a) {
                    return Err(violated(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        Ok(())
    }

    /// The element with the given exponent vector.
    pub fn element(&self, exps: &[u64]) -> SemilinearElement {
        let mut acc = self.identity();
        for (i, &e) in exps.iter().enumerate() {
            acc = self.compose(&acc, &self.power(&self.generator(i), e));
        }
        acc
    }

    /// All elements, in the enumeration order of the group.
    pub fn elements(&self) -> Vec<SemilinearElement> {
        self.group.elements().iter().map(|e| self.element(e)).collect()
    }

    pub fn apply(&self, g: &SemilinearElement, v: &[FieldElem]) -> Vector {
        let w = if g.conj { self.conj_vec(v) } else { v.to_vec() };
        g.matrix.mul_vec(&w)
    }

    fn to_ext(&self, x: &FieldElem) -> FieldElem {
        match self.ext.kind() {
            FieldKind::RelativeQuadratic { .. } => self.ext.embed_base(x),
            _ if self.e.is_some() => self.ext.from_rat(x.as_rational().expect("rational base")),
            _ => x.clone(),
        }
    }

    /// Simultaneous eigenspaces over `K` of the `K`-linear subgroup `H = ker ρ`.
    pub fn h_eigenspaces(&self) -> Result<Vec<HEigenspace>, QuotientError> {
        let n_exp = self.group.exponent().max(1);
        let zeta = self
            .base
            .primitive_root_of_unity(n_exp)
            .ok_or_else(|| QuotientError::RootsOfUnityMissing {
                n: n_exp,
                field: self.base.name(),
            })?;
        let roots: Vec<FieldElem> = (0..n_exp).map(|j| self.to_ext(&zeta.pow(j as i64))).collect();
        let h: Vec<SemilinearElement> = self.elements().into_iter().filter(|g| !g.conj).collect();
        let unit = |i: usize| -> Vector {
            (0..self.dim)
                .map(|j| if i == j { self.ext.one() } else { self.ext.zero() })
                .collect()
        };
        let mut spaces = vec![HEigenspace {
            values: vec![],
            basis: (0..self.dim).map(unit).collect(),
        }];
        for el in &h {
            let mut next = Vec::new();
            for sp in spaces {
                let b = Matrix::from_columns(&self.ext, &sp.basis);
                let restricted = el.matrix.restrict(&sp.basis).ok_or_else(|| {
                    violated("H does not preserve its own eigenspaces (G is not abelian)")
                })?;
                for r in &roots {
                    let shifted = restricted.sub(&Matrix::identity(&self.ext, sp.basis.len()).scale(r));
                    let kernel = shifted.nullspace();
                    if kernel.is_empty() {
                        continue;
                    }
                    let ambient: Vec<Vector> = kernel.iter().map(|c| b.mul_vec(c)).collect();
                    let mut values = sp.values.clone();
                    values.push(r.clone());
                    next.push(HEigenspace {
                        values,
                        basis: normalized_basis(&self.ext, &ambient),
                    });
                }
            }
            spaces = next;
        }
        let total: usize = spaces.iter().map(|s| s.basis.len()).sum();
        if total != self.dim {
            return Err(violated("H is not diagonalizable over K"));
        }
        Ok(spaces)
    }

    fn in_span(&self, basis: &[Vector], v: &[FieldElem]) -> bool {
        let mut rows = basis.to_vec();
        rows.push(v.to_vec());
        Matrix::from_rows(&self.ext, rows).expect("rectangular").rank() == basis.len()
    }

    /// A `G`-eigenvector of the `k`-span of `basis` with its character values on the
    /// generators, found by averaged projectors over the `k`-characters of `G` in
    /// lexicographic order applied to `b_1, √e·b_1, b_2, …`.
    pub fn g_eigenvector(&self, basis: &[Vector]) -> Option<(Vector, Vec<FieldElem>)> {
        let orders = self.group.orders();
        let roots: Vec<FieldElem> = orders
            .iter()
            .map(|&n| character_root(&self.base, n))
            .collect::<Option<_>>()?;
        let elements = self.group.elements();
        let mats: Vec<SemilinearElement> = elements.iter().map(|e| self.element(e)).collect();
        let sqrt_e = self
            .ext
            .relative_generator()
            .unwrap_or_else(|| self.ext.generator());
        let mut candidates: Vec<Vector> = Vec::new();
        for b in basis {
            candidates.push(b.clone());
            if self.e.is_some() {
                candidates.push(b.iter().map(|x| &sqrt_e * x).collect());
            }
        }
        let size = self.ext.from_int(self.group.size() as i64);
        let inv_size = size.inv().expect("nonzero");
        for psi in &elements {
            let value = |g: &[u64]| -> FieldElem {
                g.iter()
                    .zip(psi)
                    .zip(&roots)
                    .fold(self.base.one(), |acc, ((&gi, &ai), z)| acc * z.pow((gi * ai) as i64))
            };
            for c in &candidates {
                let mut acc = vec![self.ext.zero(); self.dim];
                for (g, m) in elements.iter().zip(&mats) {
                    let w = self.to_ext(&value(g).inv().expect("root of unity"));
                    for (a, x) in acc.iter_mut().zip(self.apply(m, c)) {
                        *a = &*a + &(&w * &x);
                    }
                }
                let v: Vector = acc.iter().map(|x| x * &inv_size).collect();
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let gen_values: Vec<FieldElem> = (0..orders.len())
                    .map(|i| {
                        let mut e = vec![0; orders.len()];
                        e[i] = 1;
                        value(&e)
                    })
                    .collect();
                let ok = (0..orders.len()).all(|i| {
                    let gv = self.apply(&self.generator(i), &v);
                    let lam = self.to_ext(&gen_values[i]);
                    gv == v.iter().map(|x| &lam * x).collect::<Vector>()
                });
                if ok {
                    return Some((v, gen_values));
                }
            }
        }
        None
    }
}

fn render_vector(v: &[FieldElem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `[V/G] = 𝕃^{dim_K V}` for a semilinear action with `μ_N ⊂ k`.
pub fn semilinear_quotient_class(s: &SemilinearAction) -> Result<Derived, QuotientError> {
    let k = s.base();
    if s.dim() == 0 {
        return Ok((KExpr::one(k), DerivationTrace::new()));
    }
    let n = s.group().exponent().max(1);
    if !k.contains_nth_roots(n) {
        return Err(QuotientError::RootsOfUnityMissing { n, field: k.name() });
    }
    let zero = KExpr::zero(k);
    let mut trace = DerivationTrace::new();
    trace.advance(
        &format!(
            "G = {} acts {}-semilinearly on V = {}^{}; H = ker(G -> Gal) acts linearly",
            s.group(),
            s.ext().name(),
            s.ext().name(),
            s.dim()
        ),
        "semilinear-structure",
        &zero,
        zero.clone(),
    );
    let spaces = s.h_eigenspaces()?;
    let mut labels = Vec::new();
    let mut dims = Vec::new();
    for (idx, sp) in spaces.iter().enumerate() {
        for g in s.elements() {
            for v in &sp.basis {
                if !s.in_span(&sp.basis, &s.apply(&g, v)) {
                    return Err(violated(format!("eigenspace {idx} of H is not G-stable")));
                }
            }
        }
        let label = format!("V_{idx}");
        trace.advance(
            &format!("{label}(H) has dim_K = {} and is G-stable", sp.basis.len()),
            "subgroup-eigenspaces",
            &zero,
            zero.clone(),
        );
        let (v, values) = s.g_eigenvector(&sp.basis).ok_or_else(|| {
            QuotientError::EigenvectorNotFound(format!("{label}(H) of dim {}", sp.basis.len()))
        })?;
        let vals: Vec<String> = values.iter().map(|x| x.to_string()).collect();
        trace.advance(
            &format!(
                "G-eigenvector {} with values ({}) on generators: P({label}(H))/G is split",
                render_vector(&v),
                vals.join(", ")
            ),
            "split-form-eigenvector",
            &zero,
            zero.clone(),
        );
        labels.push(label);
        dims.push(sp.basis.len());
    }
    let sum = record_strata(&mut trace, k, &labels, &dims);
    expect_lefschetz_power(&sum, s.dim())?;
    Ok((sum, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::DescentDatum;

    #[test]
    fn conjugation_on_the_gaussian_line() {
        let q = Field::rational();
        let k = Field::quadratic(-1).unwrap();
        let s = SemilinearAction::new(
            &q,
            Some(-1),
            AbelianGroup::cyclic(2),
            vec![true],
            vec![Matrix::identity(&k, 1)],
        )
        .unwrap();
        let (x, t) = semilinear_quotient_class(&s).unwrap();
        assert_eq!(x.render(), "1*L");
        assert!(t.anchors().contains(&"split-form-eigenvector"));
    }

    #[test]
    fn trivial_extension_matches_split_case() {
        let q = Field::rational();
        let s = SemilinearAction::new(
            &q,
            None,
            AbelianGroup::cyclic(2),
            vec![false],
            vec![Matrix::from_ints(&q, &[&[-1, 0], &[0, 1]])],
        )
        .unwrap();
        assert_eq!(semilinear_quotient_class(&s).unwrap().0.render(), "1*L^2");
    }

    #[test]
    fn quarter_turn_needs_fourth_roots() {
        let s = DescentDatum::gaussian_quarter_turn().semilinear_action().unwrap();
        assert!(matches!(
            semilinear_quotient_class(&s),
            Err(QuotientError::RootsOfUnityMissing { n: 4, .. })
        ));
    }

    #[test]
    fn k_linear_input_is_checked() {
        let q = Field::rational();
        // conjugation on Q(i) in the basis (1, i)
        let conj = Matrix::from_ints(&q, &[&[1, 0], &[0, -1]]);
        let s = SemilinearAction::from_k_linear(&q, -1, AbelianGroup::cyclic(2), vec![true], vec![conj])
            .unwrap();
        assert_eq!(s.elements().len(), 2);
        let bad = Matrix::from_ints(&q, &[&[1, 1], &[0, -1]]);
        assert!(matches!(
            SemilinearAction::from_k_linear(&q, -1, AbelianGroup::cyclic(2), vec![true], vec![bad]),
            Err(QuotientError::SemilinearityViolated(_))
        ));
    }

    #[test]
    fn mixed_action_over_cyclotomic_base() {
        // k = Q(ζ_4), K = k(√2); G = Z/4 × Z/2 with the Z/2 factor acting through Galois
        let k = Field::cyclotomic(4).unwrap();
        let ext = Field::relative_quadratic(&k, rat(0), rat(-2)).unwrap();
        let z = ext.embed_base(&k.generator());
        let g1 = Matrix::diagonal(&ext, &[z.clone(), ext.from_int(-1)]);
        let g2 = Matrix::from_ints(&ext, &[&[1, 0], &[0, 1]]);
        let s = SemilinearAction::new(
            &k,
            Some(2),
            AbelianGroup::new(vec![4, 2]).unwrap(),
            vec![false, true],
            vec![g1, g2],
        )
        .unwrap();
        let (x, _) = semilinear_quotient_class(&s).unwrap();
        assert_eq!(x.render(), "1*L^2");
    }
}
