//! `[V/G] = 𝕃^{dim V}` for a cyclic image of prime-power order whose irreducible
//! factors have dimension at most 2, by induction on the number of factors.
//!
//! With `Δ(X) = [X] - [X/G]` and `V = U ⊕ W`, `U` a faithful factor, the strata
//! `U^× × W` and `{0} × W` give `Δ(V) = u·Δ(W)`, where `u = 1` when `dim U = 1`
//! and `u = 1 + (𝕃 - 1)·[Spec K]` when `dim U = 2`, `K = k[T]/(F)` for the
//! minimal polynomial `F` of the generator on `U`.

use super::dim2::prop131_class;
use super::{expect_lefschetz_power, Derived, QuotientError};
use crate::exact::matrix::Vector;
use crate::exact::rat::{prime_power, squarefree_class};
use crate::exact::{FieldPoly, Matrix};
use crate::kring::{Atom, DerivationTrace, KExpr, StandardClass};
use crate::repgroup::{faithful_factor, irreducible_decomposition, GroupAction};

/// In `K = k[T]/(F)` with `F = T² - aT - b`, checks `b/T + a = T`: the generator
/// of `G`, acting on `Spec K` through `T ↦ b/T + a`, acts trivially.
pub fn galois_triviality_check(f: &FieldPoly) -> bool {
    if f.degree() != Some(2) {
        return false;
    }
    let f = f.monic();
    let k = f.field().clone();
    let a = -f.coeff(1);
    let b = -f.coeff(0);
    if b.is_zero() {
        return false;
    }
    // x0 + x1·T times y0 + y1·T, reduced with T² = aT + b
    let mul = |x: &[crate::exact::FieldElem; 2], y: &[crate::exact::FieldElem; 2]| {
        let c0 = &(&x[0] * &y[0]) + &(&(&x[1] * &y[1]) * &b);
        let c1 = &(&(&x[0] * &y[1]) + &(&x[1] * &y[0])) + &(&(&x[1] * &y[1]) * &a);
        [c0, c1]
    };
    let t = [k.zero(), k.one()];
    // T⁻¹ from the multiplication-by-T matrix
    let mult_t = Matrix::from_rows(
        &k,
        vec![vec![k.zero(), b.clone()], vec![k.one(), a.clone()]],
    )
    .expect("2x2");
    let Some(inv) = mult_t.solve(&[k.one(), k.zero()]) else {
        return false;
    };
    let inv_t = [inv[0].clone(), inv[1].clone()];
    if mul(&t, &inv_t) != [k.one(), k.zero()] {
        return false;
    }
    let image = mul(&[b.clone(), k.zero()], &inv_t);
    let image = [&image[0] + &a, image[1].clone()];
    image == t
}

enum Level {
    Base(String),
    Split { u_dim: usize, rest: GroupAction },
}

fn next_level(current: &GroupAction) -> Result<(Level, Vec<(String, &'static str)>, KExpr), QuotientError> {
    let k = current.field();
    let one = KExpr::one(k);
    if current.dim() == 0 {
        return Ok((Level::Base("W = 0".into()), vec![], one));
    }
    let (_, m) = current.image_generator()?;
    if m == 1 {
        return Ok((Level::Base(format!("G acts trivially on W of dim {}", current.dim())), vec![], one));
    }
    let dec = irreducible_decomposition(current)?;
    if dec.factors.len() == 1 {
        let (x, _) = prop131_class(current)?;
        return Ok((
            Level::Base(format!("W irreducible of dim {}: [W/G] = {x}", current.dim())),
            vec![],
            one,
        ));
    }
    let i = faithful_factor(&dec)?;
    let u = &dec.factors[i];
    let rest_basis: Vec<Vector> = dec
        .factors
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .flat_map(|(_, f)| f.basis.iter().cloned())
        .collect();
    let rest = current.restrict(&rest_basis)?;
    let mut steps = vec![(
        format!(
            "Delta(V) = [V] - [V/G] over the strata U^x x W and 0 x W; U = factor {} of dim {}, dim W = {}",
            i,
            u.dim,
            rest.dim()
        ),
        "stratified-difference",
    )];
    let unit = if u.dim == 2 {
        let f = &u.min_poly;
        let disc = &(&f.coeff(1) * &f.coeff(1)) - &(&f.coeff(0) * &k.from_int(4));
        let d = disc
            .as_rational()
            .and_then(|r| squarefree_class(&r))
            .ok_or_else(|| {
                QuotientError::Invalid(format!("discriminant {disc} of {f} is not a rational class"))
            })?;
        steps.push((
            format!("K = k[T]/({f}) = k(sqrt({d})), the eigenvalue field of U"),
            "quadratic-extension",
        ));
        if !galois_triviality_check(f) {
            return Err(QuotientError::CertificationFailed(format!(
                "G acts nontrivially on Spec k[T]/({f})"
            )));
        }
        steps.push((
            format!("sigma(T) = b/T + a = T in k[T]/({f}): G acts trivially on Spec K"),
            "galois-action-trivial",
        ));
        let u = &one + &(&KExpr::standard(k, StandardClass::Gm) * &KExpr::atom(k, Atom::etale(d)));
        steps.push((
            format!("U^x/G is a G_m-bundle over Spec K: u = {u}"),
            "etale-line-difference",
        ));
        u
    } else {
        steps.push((
            "G acts freely on U^x = G_m with quotient G_m: u = 1".into(),
            "free-stratum-cancellation",
        ));
        one.clone()
    };
    Ok((Level::Split { u_dim: u.dim, rest }, steps, unit))
}

/// The class of `V/G` through `Δ(V) = u·Δ(W)`, for a cyclic image of prime-power order.
pub fn cyclic_prime_power_class(a: &GroupAction) -> Result<Derived, QuotientError> {
    let k = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok((KExpr::one(k), DerivationTrace::new()));
    }
    let image = a.cyclic_image()?;
    let order = image.group().size();
    if order > 1 && prime_power(order).is_none() {
        return Err(QuotientError::NotPrimePower { order });
    }
    let one = KExpr::one(k);
    let mut trace = DerivationTrace::new();
    trace.advance(
        &format!("G acts through its image, cyclic of order {order}; Delta(V) = 1*Delta(V)"),
        "monodromy-image",
        &one,
        one.clone(),
    );
    let mut product = one.clone();
    let mut current = image;
    loop {
        let (level, steps, unit) = next_level(&current)?;
        for (rule, anchor) in steps {
            trace.advance(&rule, anchor, &one, product.clone());
        }
        match level {
            Level::Base(reason) => {
                trace.advance(
                    &format!("{reason}, so Delta(W) = 0"),
                    "recursion-base",
                    &one,
                    KExpr::zero(k),
                );
                break;
            }
            Level::Split { u_dim, rest } => {
                product = &product * &unit;
                trace.advance(
                    &format!("Delta(V) = u*Delta(W) with dim U = {u_dim}, recurse on W"),
                    "difference-recursion",
                    &one,
                    product.clone(),
                );
                current = rest;
            }
        }
    }
    let class = KExpr::lefschetz_power(k, n as u32);
    trace.advance(
        &format!("[V/G] = L^{n} - Delta(V)"),
        "class-from-difference",
        &one,
        class.clone(),
    );
    expect_lefschetz_power(&class, n)?;
    Ok((class, trace))
}
