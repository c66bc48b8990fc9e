//! Randomized property suites shared by the property tests and the acceptance target.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use kquot_core::exact::rat::ratio;
use kquot_core::exact::{Field, FieldElem};
use kquot_core::kring::{
    normalize, parse_kexpr, sb_realize, specialize_count, Atom, KExpr, Monomial,
    SpecializationContext,
};
use kquot_core::oracle::hilbert::relevant_places;
use kquot_core::oracle::{
    conic_rational_point, hilbert_symbol, locally_solvable_by_search, ArithmeticFacts, ConicStatus,
    Place, DEFAULT_CONIC_HEIGHT,
};
use kquot_core::quotient::stratified_sum;

pub struct Property {
    pub name: &'static str,
    pub cases: u32,
    run: fn(u32) -> Result<(), String>,
}

impl Property {
    pub fn run(&self) -> Result<u32, String> {
        (self.run)(self.cases).map(|_| self.cases)
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn q() -> Field {
    Field::rational()
}

pub fn arb_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        prop::sample::select(vec![-1i64, 2, -2, -3, 5, 6]).prop_map(Atom::etale),
        prop::sample::select(vec![(-1i64, -1i64), (2, 5), (-1, 3), (3, 5), (-2, -5), (-1, -6)])
            .prop_map(|(a, b)| Atom::conic(a, b)),
    ]
}

pub fn arb_kexpr() -> impl Strategy<Value = KExpr> {
    let term = (-4i64..=4, 0u32..=3, prop::collection::vec(arb_atom(), 0..=2));
    prop::collection::vec(term, 0..=4).prop_map(|terms| {
        let base = q();
        terms.into_iter().fold(KExpr::zero(&base), |acc, (c, l, atoms)| {
            &acc + &KExpr::monomial(&base, BigInt::from(c), Monomial::new(l, atoms))
        })
    })
}

fn arb_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![("c", 3i64), ("c", 4), ("c", 5), ("q", 2), ("q", -3), ("q", 5)])
        .prop_map(|(kind, n)| match kind {
            "c" => Field::cyclotomic(n as u64).expect("cyclotomic field"),
            _ => Field::quadratic(n).expect("quadratic field"),
        })
}

fn elem(k: &Field, coords: &[(i64, i64)]) -> FieldElem {
    k.from_coords(
        coords
            .iter()
            .take(k.degree())
            .map(|&(n, d)| ratio(n, d))
            .collect(),
    )
}

fn arb_coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 4)
}

/// `Σ_S Π_{i∈S} (L - 1)(1 + L + … + L^{d_i - 1})` as integer coefficients.
pub fn binomial_strata(dims: &[usize]) -> Vec<i64> {
    fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    let total: usize = dims.iter().sum();
    let mut sum = vec![0i64; total + 1];
    for subset in 0..1usize << dims.len() {
        let mut term = vec![1i64];
        for (i, &d) in dims.iter().enumerate() {
            if subset >> i & 1 == 1 {
                term = mul(&term, &[-1, 1]);
                term = mul(&term, &vec![1; d]);
            }
        }
        for (i, c) in term.iter().enumerate() {
            sum[i] += c;
        }
    }
    sum
}

fn kexpr_ring_axioms(cases: u32) -> Result<(), String> {
    check(cases, (arb_kexpr(), arb_kexpr(), arb_kexpr()), |(x, y, z)| {
        let base = q();
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &KExpr::one(&base), x.clone());
        prop_assert_eq!(&x + &KExpr::zero(&base), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        Ok(())
    })
}

fn phi_homomorphism(cases: u32) -> Result<(), String> {
    check(cases, (arb_kexpr(), arb_kexpr()), |(x, y)| {
        prop_assert_eq!(sb_realize(&(&x + &y)), sb_realize(&x).add(&sb_realize(&y)));
        prop_assert_eq!(sb_realize(&(&x * &y)), sb_realize(&x).mul(&sb_realize(&y)));
        let lx = &KExpr::lefschetz(&q()) * &x;
        prop_assert!(sb_realize(&lx).is_zero());
        Ok(())
    })
}

fn specialize_homomorphism(cases: u32) -> Result<(), String> {
    let primes = prop::sample::select(vec![7u64, 11, 13, 17, 19, 23, 29]);
    check(cases, (arb_kexpr(), arb_kexpr(), primes), |(x, y, p)| {
        let ctx = SpecializationContext::new(&q(), p).expect("good prime");
        let s = |e: &KExpr| specialize_count(e, &ctx).expect("good reduction");
        prop_assert_eq!(s(&(&x + &y)), s(&x) + s(&y));
        prop_assert_eq!(s(&(&x * &y)), s(&x) * s(&y));
        prop_assert_eq!(s(&KExpr::lefschetz(&q())), BigInt::from(p));
        prop_assert_eq!(s(&KExpr::one(&q())), BigInt::from(1));
        Ok(())
    })
}

fn normalize_idempotence(cases: u32) -> Result<(), String> {
    check(cases, arb_kexpr(), |x| {
        let (once, _) = normalize(&x, &ArithmeticFacts);
        let (twice, steps) = normalize(&once, &ArithmeticFacts);
        prop_assert_eq!(&once, &twice);
        prop_assert!(steps.steps().iter().all(|s| s.before == s.after));
        Ok(())
    })
}

fn binomial_stratification(cases: u32) -> Result<(), String> {
    let dims = prop::collection::vec(1usize..=4, 1..=6);
    check(cases, dims, |dims| {
        let n: usize = dims.iter().sum();
        let mut power = vec![0i64; n + 1];
        power[n] = 1;
        prop_assert_eq!(binomial_strata(&dims), power.clone());
        let lib = stratified_sum(&q(), &dims);
        prop_assert_eq!(lib.as_lpoly(), Some(power));
        prop_assert!(lib.is_lefschetz_power(n as u32));
        Ok(())
    })
}

fn field_ring_axioms(cases: u32) -> Result<(), String> {
    check(
        cases,
        (arb_field(), arb_coords(), arb_coords(), arb_coords()),
        |(k, a, b, c)| {
            let (x, y, z) = (elem(&k, &a), elem(&k, &b), elem(&k, &c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                let inv = x.inv().expect("nonzero element is invertible");
                prop_assert!((&x * &inv).is_one());
            }
            Ok(())
        },
    )
}

fn expression_round_trip(cases: u32) -> Result<(), String> {
    check(cases, arb_kexpr(), |x| {
        let text = x.render();
        let back = parse_kexpr(&text, &q()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.render(), text);
        prop_assert_eq!(back, x);
        Ok(())
    })
}

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |&x| x != 0)
}

fn hilbert_product_formula(cases: u32) -> Result<(), String> {
    check(cases, (nonzero(30), nonzero(30)), |(a, b)| {
        let places = relevant_places(a, b);
        let product: i32 = places.iter().map(|&v| hilbert_symbol(a, b, v) as i32).product();
        prop_assert_eq!(product, 1, "({}, {})", a, b);
        for p in [31u64, 37, 41] {
            prop_assert_eq!(hilbert_symbol(a, b, Place::Prime(p)), 1);
        }
        Ok(())
    })
}

fn local_formulas_match_search(cases: u32) -> Result<(), String> {
    check(cases, (nonzero(30), nonzero(30)), |(a, b)| {
        for v in relevant_places(a, b) {
            let formula = hilbert_symbol(a, b, v) == 1;
            prop_assert_eq!(formula, locally_solvable_by_search(a, b, v), "({}, {})_{}", a, b, v);
        }
        Ok(())
    })
}

fn split_conics_have_points(cases: u32) -> Result<(), String> {
    check(cases, (nonzero(30), nonzero(30)), |(a, b)| {
        let s = conic_rational_point(a, b, DEFAULT_CONIC_HEIGHT)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        if let ConicStatus::Split { point: (x, y, z) } = s.status {
            let (x, y, z) = (x as i128, y as i128, z as i128);
            prop_assert!((x, y, z) != (0, 0, 0));
            prop_assert_eq!(s.a as i128 * x * x + s.b as i128 * y * y, z * z);
            prop_assert!(relevant_places(a, b).iter().all(|&v| hilbert_symbol(a, b, v) == 1));
        }
        Ok(())
    })
}

pub fn algebraic_properties() -> Vec<Property> {
    vec![
        Property { name: "kexpr ring axioms", cases: 300, run: kexpr_ring_axioms },
        Property { name: "phi homomorphism", cases: 200, run: phi_homomorphism },
        Property { name: "specialize homomorphism", cases: 200, run: specialize_homomorphism },
        Property { name: "normalize idempotence", cases: 200, run: normalize_idempotence },
        Property { name: "binomial stratification", cases: 200, run: binomial_stratification },
        Property { name: "field ring axioms", cases: 200, run: field_ring_axioms },
        Property { name: "expression round trip", cases: 200, run: expression_round_trip },
    ]
}

pub fn arithmetic_properties() -> Vec<Property> {
    vec![
        Property { name: "hilbert product formula", cases: 50, run: hilbert_product_formula },
        Property { name: "local formulas match search", cases: 100, run: local_formulas_match_search },
        Property { name: "split conics have points", cases: 100, run: split_conics_have_points },
    ]
}

/// Runs one named property from either list.
pub fn run_named(name: &str) {
    let p = algebraic_properties()
        .into_iter()
        .chain(arithmetic_properties())
        .find(|p| p.name == name)
        .unwrap_or_else(|| panic!("no property {name}"));
    if let Err(e) = p.run() {
        panic!("{name}: {e}");
    }
}
