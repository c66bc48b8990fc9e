//! Built-in batteries run by `verify-suite`.

use num_bigint::BigInt;

use super::dispatch::{demo_example_1_2, DispatchOptions};
use super::document::{ExitStatus, ResultDocument};
use crate::exact::{Field, FieldElem, Matrix};
use crate::kring::SpecializationContext;
use crate::oracle::{
    conic_rational_point, quaternary_fixed_point_test, twisted_orbit_count, Stratum,
    DEFAULT_CONIC_HEIGHT, DEFAULT_QUATERNARY_BUDGET, DEFAULT_QUATERNARY_HEIGHT,
};
use crate::quotient::{descended_symbol, DescentDatum, RouteRegistry};
use crate::repgroup::{AbelianGroup, GroupAction};

/// A named action whose quotient is expected to be `𝕃^dim`.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub action: GroupAction,
}

fn diagonal(k: &Field, orders: &[u64], diags: &[Vec<FieldElem>]) -> GroupAction {
    let gens = diags.iter().map(|d| Matrix::diagonal(k, d)).collect();
    GroupAction::checked(
        AbelianGroup::new(orders.to_vec()).expect("orders >= 2"),
        k,
        diags[0].len(),
        gens,
    )
    .expect("valid diagonal action")
}

/// Diagonal actions over Q, Q(ζ3), Q(ζ4) and Q(ζ6) in dimensions 1 to 4.
pub fn split_battery() -> Vec<Case> {
    let mut out = Vec::new();
    let mut add = |name: &str, a: GroupAction| {
        out.push(Case {
            name: name.into(),
            action: a,
        })
    };
    let q = Field::rational();
    let n = |k: &Field, v: i64| k.from_int(v);
    add("Q, Z/2, diag(-1)", diagonal(&q, &[2], &[vec![n(&q, -1)]]));
    add("Q, Z/2, diag(-1,-1)", diagonal(&q, &[2], &[vec![n(&q, -1), n(&q, -1)]]));
    add(
        "Q, Z/2, diag(-1,1,-1)",
        diagonal(&q, &[2], &[vec![n(&q, -1), n(&q, 1), n(&q, -1)]]),
    );
    add(
        "Q, Z/2 x Z/2 on A^4",
        diagonal(
            &q,
            &[2, 2],
            &[
                vec![n(&q, -1), n(&q, -1), n(&q, 1), n(&q, 1)],
                vec![n(&q, 1), n(&q, -1), n(&q, -1), n(&q, 1)],
            ],
        ),
    );

    let k3 = Field::cyclotomic(3).expect("Q(zeta_3)");
    let z = k3.generator();
    let z2 = z.pow(2);
    add("Q(zeta_3), Z/3, diag(z)", diagonal(&k3, &[3], &[vec![z.clone()]]));
    add(
        "Q(zeta_3), Z/3, diag(z,z^2)",
        diagonal(&k3, &[3], &[vec![z.clone(), z2.clone()]]),
    );
    add(
        "Q(zeta_3), Z/3 x Z/3 on A^3",
        diagonal(
            &k3,
            &[3, 3],
            &[
                vec![z.clone(), z.clone(), n(&k3, 1)],
                vec![n(&k3, 1), z2.clone(), z.clone()],
            ],
        ),
    );
    add(
        "Q(zeta_3), Z/6, diag(-z,z,-1,1)",
        diagonal(&k3, &[6], &[vec![-z.clone(), z.clone(), n(&k3, -1), n(&k3, 1)]]),
    );

    let k4 = Field::cyclotomic(4).expect("Q(zeta_4)");
    let i = k4.generator();
    add("Q(i), Z/4, diag(i,-1)", diagonal(&k4, &[4], &[vec![i.clone(), n(&k4, -1)]]));
    add(
        "Q(i), Z/4, diag(i,i,i)",
        diagonal(&k4, &[4], &[vec![i.clone(), i.clone(), i.clone()]]),
    );
    add(
        "Q(i), Z/4 x Z/2 on A^4",
        diagonal(
            &k4,
            &[4, 2],
            &[
                vec![i.clone(), -i.clone(), n(&k4, 1), n(&k4, -1)],
                vec![n(&k4, -1), n(&k4, 1), n(&k4, -1), n(&k4, 1)],
            ],
        ),
    );

    let k6 = Field::cyclotomic(6).expect("Q(zeta_6)");
    let w = k6.generator();
    add("Q(zeta_6), Z/6, diag(w)", diagonal(&k6, &[6], &[vec![w.clone()]]));
    add(
        "Q(zeta_6), Z/6, diag(w,w^2,w^3)",
        diagonal(&k6, &[6], &[vec![w.clone(), w.pow(2), w.pow(3)]]),
    );
    add(
        "Q(zeta_6), Z/6 x Z/3 on A^4",
        diagonal(
            &k6,
            &[6, 3],
            &[
                vec![w.clone(), w.pow(5), n(&k6, 1), w.pow(3)],
                vec![w.pow(2), n(&k6, 1), w.pow(4), n(&k6, 1)],
            ],
        ),
    );
    out
}

fn block_sum(blocks: &[&[&[i64]]]) -> Matrix {
    let q = Field::rational();
    let ms: Vec<Matrix> = blocks.iter().map(|b| Matrix::from_ints(&q, b)).collect();
    Matrix::direct_sum(&ms)
}

/// Cyclic actions of order 4 and 3 over Q mixing one- and two-dimensional factors.
pub fn prime_power_battery() -> Vec<Case> {
    let q = Field::rational();
    let rot: &[&[i64]] = &[&[0, -1], &[1, 0]];
    let cube: &[&[i64]] = &[&[0, -1], &[1, -1]];
    let neg: &[&[i64]] = &[&[-1]];
    let one: &[&[i64]] = &[&[1]];
    let specs: Vec<(&str, u64, Vec<&[&[i64]]>)> = vec![
        ("Z/4, rot", 4, vec![rot]),
        ("Z/4, rot + (-1)", 4, vec![rot, neg]),
        ("Z/4, rot + rot", 4, vec![rot, rot]),
        ("Z/4, rot + (-1) + 1", 4, vec![rot, neg, one]),
        ("Z/4, rot + rot + (-1)", 4, vec![rot, rot, neg]),
        ("Z/4, rot + (-1) + (-1) + 1", 4, vec![rot, neg, neg, one]),
        ("Z/4, rot + rot + rot", 4, vec![rot, rot, rot]),
        ("Z/4, rot + rot + (-1) + 1", 4, vec![rot, rot, neg, one]),
        ("Z/3, c3", 3, vec![cube]),
        ("Z/3, c3 + 1", 3, vec![cube, one]),
        ("Z/3, c3 + c3", 3, vec![cube, cube]),
        ("Z/3, c3 + 1 + 1", 3, vec![cube, one, one]),
        ("Z/3, c3 + c3 + 1", 3, vec![cube, cube, one]),
        ("Z/3, c3 + c3 + c3", 3, vec![cube, cube, cube]),
    ];
    let mut out: Vec<Case> = specs
        .into_iter()
        .map(|(name, n, blocks)| Case {
            name: name.into(),
            action: GroupAction::cyclic(&q, block_sum(&blocks), n).expect("valid action"),
        })
        .collect();
    let p3 = Matrix::from_ints(&q, &[&[1, 1, 0], &[0, 1, 2], &[0, 0, 1]]);
    let p4 = Matrix::from_ints(&q, &[&[1, 2, 0, 1], &[0, 1, 1, 0], &[0, 0, 1, 3], &[0, 0, 0, 1]]);
    for (name, base, p) in [
        ("Z/4, rot + (-1), conjugated", out[1].action.clone(), p3),
        ("Z/3, c3 + c3, conjugated", out[10].action.clone(), p4),
    ] {
        out.push(Case {
            name: name.into(),
            action: base.conjugate_by(&p).expect("invertible"),
        });
    }
    out
}

/// `M = [[0, 1], [c, 0]]` and a scaled variant, for each `d` and `c`.
pub fn descent_battery() -> Vec<DescentDatum> {
    let mut out = Vec::new();
    for d in [-1i64, 2, -2, -3, 5] {
        for c in [1i64, -1, 2, -2] {
            let k = Field::quadratic(d).expect("squarefree d");
            let m = Matrix::from_ints(&k, &[&[0, 1], &[c, 0]]);
            out.push(DescentDatum::new(d, m.clone()).expect("M * conj(M) = c"));
            if d == -1 && c == -1 {
                let lambda = k.from_int(1) + k.generator();
                out.push(DescentDatum::new(d, m.scale(&lambda)).expect("scaled datum"));
            }
        }
    }
    out
}

fn line(ok: bool, name: &str, detail: String) -> String {
    format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })
}

fn lefschetz_battery(route: &str, cases: &[Case]) -> (bool, String) {
    let reg = RouteRegistry::standard();
    let mut bad = Vec::new();
    for c in cases {
        let p = crate::quotient::QuotientProblem::linear(c.action.clone());
        match reg.run(&p, Some(route)) {
            Ok((_, (x, t))) if x.is_lefschetz_power(c.action.dim() as u32) && t.is_chained() => {}
            Ok((_, (x, _))) => bad.push(format!("{}: {}", c.name, x.render())),
            Err(e) => bad.push(format!("{}: {e}", c.name)),
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} cases give L^dim", cases.len())
        } else {
            bad.join("; ")
        },
    )
}

fn count_battery(cases: &[Case]) -> (bool, String) {
    let (mut checked, mut skipped) = (0, 0);
    let mut bad = Vec::new();
    for c in cases {
        for p in [3u64, 5] {
            if c.action.group().size() % p == 0 {
                skipped += 1;
                continue;
            }
            let Ok(ctx) = SpecializationContext::new(c.action.field(), p) else {
                continue;
            };
            let expected = BigInt::from(ctx.q).pow(c.action.dim() as u32);
            match twisted_orbit_count(&c.action, Stratum::Full, ctx.q) {
                Ok(n) if BigInt::from(n) == expected => checked += 1,
                Ok(n) => bad.push(format!("{} at q = {}: {n}", c.name, ctx.q)),
                Err(e) => bad.push(format!("{} at q = {}: {e}", c.name, ctx.q)),
            }
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} twisted counts equal q^dim, {skipped} skipped at p dividing |G|")
        } else {
            bad.join("; ")
        },
    )
}

fn descent_gate() -> (bool, String) {
    let mut decided = 0;
    let mut bad = Vec::new();
    for dd in descent_battery() {
        let (d, c) = descended_symbol(&dd);
        let conic = conic_rational_point(d, c, DEFAULT_CONIC_HEIGHT);
        let verdict =
            quaternary_fixed_point_test(&dd, DEFAULT_QUATERNARY_HEIGHT, DEFAULT_QUATERNARY_BUDGET);
        match (conic, verdict) {
            (Ok(s), Ok(v)) => {
                decided += 1;
                if s.is_split() != Some(v.has_solution()) {
                    bad.push(format!("(d, c) = ({d}, {c}): {} but {v}", s.render_status()));
                }
            }
            (Err(e), _) | (_, Err(e)) => bad.push(format!("(d, c) = ({d}, {c}): {e}")),
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() {
            format!("{decided} descent data agree with the Hilbert symbol of (d, c)")
        } else {
            bad.join("; ")
        },
    )
}

/// One PASS or FAIL line per battery.
pub fn verify_suite() -> ResultDocument {
    let mut lines = Vec::new();
    let mut all = true;
    let mut record = |name: &str, (ok, detail): (bool, String)| {
        all &= ok;
        lines.push(line(ok, name, detail));
    };
    record("split battery", lefschetz_battery("split", &split_battery()));
    record(
        "prime-power battery",
        lefschetz_battery("prime-power", &prime_power_battery()),
    );
    let demo = demo_example_1_2(&DispatchOptions::default());
    record(
        "example 1.2",
        (
            demo.status == ExitStatus::Ok,
            demo.expression.clone().unwrap_or_default(),
        ),
    );
    let mut cases = split_battery();
    cases.extend(prime_power_battery());
    record("twisted counts", count_battery(&cases));
    record("descent gate", descent_gate());
    let mut doc = ResultDocument::default();
    doc.section("suite", lines);
    if !all {
        doc.fail(ExitStatus::Inconclusive, "suite", "some batteries failed");
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let doc = verify_suite();
        assert_eq!(doc.status, ExitStatus::Ok, "{}", doc.render());
    }
}
