//! `[V/G] = 𝕃^{dim V}` when `k` contains the `N`-th roots of unity, `N = exp(G)`.
//!
//! `V = ⊕ V_χ` over the characters of `G`. For a subset `I` of the support, the
//! stratum `V_I` of vectors with nonzero component exactly in `I` fibres over
//! `∏_{χ∈I} P(V_χ)` with fibre `G_m^I`, and `G` acts on the fibre through a torus
//! whose quotient is again a torus.

use super::{expect_lefschetz_power, Derived, QuotientError};
use crate::exact::Field;
use crate::kring::{DerivationTrace, KExpr, StandardClass};
use crate::repgroup::{character_eigenspaces, GroupAction};

/// `(𝕃 - 1)^{#I}·∏_{i∈I} [P^{d_i - 1}]`.
fn stratum_class(base: &Field, dims: &[usize], subset: usize) -> KExpr {
    let gm = KExpr::standard(base, StandardClass::Gm);
    let mut out = KExpr::one(base);
    for (i, &d) in dims.iter().enumerate() {
        if subset >> i & 1 == 1 {
            let proj = KExpr::standard(base, StandardClass::Projective(d as u32 - 1));
            out = &(&out * &gm) * &proj;
        }
    }
    out
}

fn subset_label(labels: &[String], subset: usize) -> String {
    let chosen: Vec<&str> = labels
        .iter()
        .enumerate()
        .filter(|(i, _)| subset >> i & 1 == 1)
        .map(|(_, l)| l.as_str())
        .collect();
    format!("{{{}}}", chosen.join(", "))
}

/// `Σ_I (𝕃 - 1)^{#I}·∏_{i∈I} [P^{d_i - 1}]` over all subsets of the given eigenspace dimensions.
pub fn stratified_sum(base: &Field, dims: &[usize]) -> KExpr {
    let mut sum = KExpr::zero(base);
    for subset in 0..1usize << dims.len() {
        sum = &sum + &stratum_class(base, dims, subset);
    }
    sum
}

/// Appends one step per stratum and the closing dimension check.
pub(crate) fn record_strata(
    trace: &mut DerivationTrace,
    base: &Field,
    labels: &[String],
    dims: &[usize],
) -> KExpr {
    let zero = KExpr::zero(base);
    let mut sum = trace.current().cloned().unwrap_or_else(|| zero.clone());
    for subset in 0..1usize << dims.len() {
        let term = stratum_class(base, dims, subset);
        let rule = if subset == 0 {
            "stratum {} is the origin: + 1".to_string()
        } else {
            format!(
                "stratum {}: + (L - 1)^{}*[P^(d-1)] = {}",
                subset_label(labels, subset),
                subset.count_ones(),
                term
            )
        };
        sum = &sum + &term;
        trace.advance(&rule, "character-stratum", &zero, sum.clone());
    }
    let n: usize = dims.iter().sum();
    trace.advance(
        &format!("sum over strata depends only on dim V = {n}"),
        "dimension-only-sum",
        &zero,
        sum.clone(),
    );
    sum
}

/// The class of `V/G` through the eigenspace stratification; requires `μ_N ⊂ k`.
pub fn diagonal_split_class(a: &GroupAction) -> Result<Derived, QuotientError> {
    let k = a.field();
    if a.dim() == 0 {
        return Ok((KExpr::one(k), DerivationTrace::new()));
    }
    let decomposition = character_eigenspaces(a)?;
    let dims = decomposition.dims();
    let labels: Vec<String> = decomposition
        .entries
        .iter()
        .map(|(chi, _)| chi.to_string())
        .collect();
    let mut trace = DerivationTrace::new();
    let zero = KExpr::zero(k);
    let listing: Vec<String> = labels
        .iter()
        .zip(&dims)
        .map(|(l, d)| format!("dim V_{l} = {d}"))
        .collect();
    trace.advance(
        &format!("V = sum of eigenspaces: {}", listing.join(", ")),
        "eigenspace-decomposition",
        &zero,
        zero.clone(),
    );
    let sum = record_strata(&mut trace, k, &labels, &dims);
    expect_lefschetz_power(&sum, a.dim())?;
    Ok((sum, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    #[test]
    fn documented_split_classes() {
        let q = Field::rational();
        let sign = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]), 2).unwrap();
        let (x, t) = diagonal_split_class(&sign).unwrap();
        assert_eq!(x.render(), "1*L^2");
        assert!(t.is_chained());
        assert_eq!(t.len(), 4);

        let k = Field::cyclotomic(4).unwrap();
        let z = k.generator();
        let g = Matrix::diagonal(&k, &[z, k.from_int(-1)]);
        let a = GroupAction::cyclic(&k, g, 4).unwrap();
        let (x, t) = diagonal_split_class(&a).unwrap();
        assert_eq!(x.render(), "1*L^2");
        assert_eq!(t.anchors().iter().filter(|s| **s == "character-stratum").count(), 4);

        let triv = GroupAction::trivial(&q, 3);
        assert_eq!(diagonal_split_class(&triv).unwrap().0.render(), "1*L^3");
        let (x, t) = diagonal_split_class(&GroupAction::trivial(&q, 0)).unwrap();
        assert_eq!(x.render(), "1");
        assert!(t.is_empty());
    }

    #[test]
    fn missing_roots_of_unity() {
        let q = Field::rational();
        let rot = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]), 4).unwrap();
        let err = diagonal_split_class(&rot).unwrap_err();
        assert!(matches!(err, QuotientError::RootsOfUnityMissing { n: 4, .. }));
        assert_eq!(err.anchor(), "roots-of-unity-hypothesis");
    }

    #[test]
    fn stratified_sum_examples() {
        let q = Field::rational();
        assert_eq!(stratified_sum(&q, &[1, 1]).render(), "1*L^2");
        assert_eq!(stratified_sum(&q, &[2, 3, 1]).render(), "1*L^6");
        assert_eq!(stratified_sum(&q, &[]).render(), "1");
    }
}
