//! One PASS or FAIL line per acceptance criterion.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use kquot_core::cli::suite::{descent_battery, prime_power_battery, split_battery, Case};
use kquot_core::exact::{Field, FieldElem, FieldPoly};
use kquot_core::kring::{parse_kexpr, SpecializationContext};
use kquot_core::oracle::hilbert::relevant_places;
use kquot_core::oracle::{
    count_affine_points, hilbert_symbol, invariant_presentation, quaternary_fixed_point_test,
    CountTarget, CounterRegistry, QuaternaryVerdict, Stratum, DEFAULT_QUATERNARY_BUDGET,
    DEFAULT_QUATERNARY_HEIGHT,
};
use kquot_core::quotient::{
    cyclic_prime_power_class, descended_symbol, galois_triviality_check, diagonal_split_class,
    DescentDatum, QuotientProblem, RouteRegistry,
};
use kquot_core::repgroup::GroupAction;

const CASE_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(30);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(problems: Vec<String>, summary: String) -> Verdict {
    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            summary
        } else {
            problems.join("; ")
        },
    }
}

/// Distinct characters of a diagonal action with their multiplicities.
fn diagonal_characters(a: &GroupAction) -> Vec<usize> {
    let mut chars: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for i in 0..a.dim() {
        let key = a.generators().iter().map(|g| g.get(i, i).render()).collect();
        *chars.entry(key).or_default() += 1;
    }
    chars.into_values().collect()
}

fn split_fields() -> Vec<String> {
    ["Q", "Q(zeta_3)", "Q(i)", "Q(zeta_6)"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn criterion_1() -> Verdict {
    let cases = split_battery();
    let mut problems = Vec::new();
    if cases.len() < 12 {
        problems.push(format!("only {} cases", cases.len()));
    }
    for f in split_fields() {
        if !cases.iter().any(|c| c.name.starts_with(&format!("{f},"))) {
            problems.push(format!("no case over {f}"));
        }
    }
    let mut slowest = Duration::ZERO;
    for c in &cases {
        let a = &c.action;
        if a.dim() > 4 || !a.generators().iter().all(|g| g.is_diagonal()) {
            problems.push(format!("{}: not diagonal of dim <= 4", c.name));
        }
        let start = Instant::now();
        let result = diagonal_split_class(a);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        match result {
            Ok((x, trace)) => {
                if !x.is_lefschetz_power(a.dim() as u32) {
                    problems.push(format!("{}: {}", c.name, x.render()));
                }
                let dims = diagonal_characters(a);
                let mut power = vec![0i64; a.dim() + 1];
                power[a.dim()] = 1;
                if support::binomial_strata(&dims) != power {
                    problems.push(format!("{}: strata do not sum to L^dim", c.name));
                }
                let strata = trace.anchors().iter().filter(|s| **s == "character-stratum").count();
                if strata != 1 << dims.len() || !trace.is_chained() {
                    problems.push(format!("{}: {strata} strata for {} characters", c.name, dims.len()));
                }
            }
            Err(e) => problems.push(format!("{}: {e}", c.name)),
        }
        if elapsed > CASE_LIMIT {
            problems.push(format!("{}: took {elapsed:?}", c.name));
        }
    }
    verdict(
        problems,
        format!("{} diagonal actions give L^dim exactly, slowest {slowest:?}", cases.len()),
    )
}

fn criterion_2() -> Verdict {
    let cases = prime_power_battery();
    let mut problems = Vec::new();
    let q = Field::rational();
    for (n, phi) in [(3u64, [1i64, 1, 1]), (4, [1, 0, 1]), (6, [1, -1, 1])] {
        let coeffs = phi.iter().rev().map(|&c| q.from_int(c)).collect();
        let poly = FieldPoly::new(&q, coeffs);
        if !galois_triviality_check(&poly) {
            problems.push(format!("Galois action on the roots of Phi_{n} is not trivial"));
        }
    }
    let registry = RouteRegistry::standard();
    let mut slowest = Duration::ZERO;
    let mut levels = 0;
    for c in &cases {
        let a = &c.action;
        let order = a.group().size();
        if !(order == 3 || order == 4) || !(2..=6).contains(&a.dim()) || !a.field().is_rational() {
            problems.push(format!("{}: outside Z/3, Z/4 on dims 2-6 over Q", c.name));
        }
        match registry.select(&QuotientProblem::linear(a.clone())) {
            Ok(r) if r.name() == "prime-power" => {}
            Ok(r) => problems.push(format!("{}: routed to {}", c.name, r.name())),
            Err(e) => problems.push(format!("{}: {e}", c.name)),
        }
        let start = Instant::now();
        let result = cyclic_prime_power_class(a);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        match result {
            Ok((x, trace)) => {
                if !x.is_lefschetz_power(a.dim() as u32) {
                    problems.push(format!("{}: {}", c.name, x.render()));
                }
                let anchors = trace.anchors();
                let count = |s: &str| anchors.iter().filter(|a| **a == s).count();
                let recursions = count("difference-recursion");
                let checks = count("galois-action-trivial");
                let free = count("free-stratum-cancellation");
                levels += recursions;
                let single_factor = a.dim() == 2 && recursions == 0;
                let needed: &[&str] = if single_factor {
                    &["recursion-base"]
                } else {
                    &["stratified-difference", "recursion-base", "class-from-difference"]
                };
                for needed in needed {
                    if count(needed) == 0 {
                        problems.push(format!("{}: no {needed} step", c.name));
                    }
                }
                if (!single_factor && recursions == 0)
                    || recursions != checks + free
                    || count("etale-line-difference") != checks
                {
                    problems.push(format!(
                        "{}: {recursions} recursion steps, {checks} Galois checks, {free} free strata",
                        c.name
                    ));
                }
                if !trace.is_chained() {
                    problems.push(format!("{}: trace is not chained", c.name));
                }
            }
            Err(e) => problems.push(format!("{}: {e}", c.name)),
        }
        if elapsed > CASE_LIMIT {
            problems.push(format!("{}: took {elapsed:?}", c.name));
        }
    }
    verdict(
        problems,
        format!(
            "{} actions give L^dim through {levels} recursion levels, slowest {slowest:?}",
            cases.len()
        ),
    )
}

fn kquot(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_kquot"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("kquot runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        start.elapsed(),
    )
}

/// `det(v, M·v̄)` for `v = (x1 + y1·i, x2 + y2·i)` and `M = [[0, 1], [-1, 0]]`, in Gaussian integers.
fn quarter_turn_fixed_point(x: [i64; 4]) -> (i64, i64) {
    let v = [(x[0], x[1]), (x[2], x[3])];
    let conj = |(a, b): (i64, i64)| (a, -b);
    let neg = |(a, b): (i64, i64)| (-a, -b);
    let mul = |(a, b): (i64, i64), (c, d): (i64, i64)| (a * c - b * d, a * d + b * c);
    let w = [conj(v[1]), neg(conj(v[0]))];
    let (p, q) = (mul(v[0], w[1]), mul(v[1], w[0]));
    (p.0 - q.0, p.1 - q.1)
}

fn criterion_3() -> Verdict {
    let (code, out, elapsed) = kquot(&["demo", "example-1-2"]);
    let mut problems = Vec::new();
    if code != 0 {
        problems.push(format!("exit {code}"));
    }
    let expected = "1*L*C(-1,-1) - 1*C(-1,-1) + 1";
    for needle in [
        format!("class: {expected}"),
        "non-split, ramified at: 2, inf".to_string(),
        "x1^2 + y1^2 + x2^2 + y2^2 = 0".to_string(),
        "no nontrivial zero (positive definite)".to_string(),
        format!("certificate: {expected} != 1*L^2"),
    ] {
        if !out.contains(&needle) {
            problems.push(format!("missing \"{needle}\""));
        }
    }
    let q = Field::rational();
    let parsed = parse_kexpr(expected, &q).map(|x| x.render());
    if parsed.as_deref() != Ok(expected) {
        problems.push("class does not re-parse to itself".into());
    }
    for p in [3u64, 5, 7, 13] {
        // a smooth conic over F_p has p + 1 points
        let count = 1 + (p - 1) * (p + 1);
        if count != p * p || !out.contains(&format!("p = {p}: {} = p^2", p * p)) {
            problems.push(format!("specialization at {p}"));
        }
    }
    let range = -4i64..=4;
    for x1 in range.clone() {
        for y1 in range.clone() {
            for x2 in range.clone() {
                for y2 in range.clone() {
                    let x = [x1, y1, x2, y2];
                    if x != [0; 4] && quarter_turn_fixed_point(x) == (0, 0) {
                        problems.push(format!("fixed point {x:?}"));
                    }
                }
            }
        }
    }
    let (code, certified, _) = kquot(&[
        "quotient-class",
        "problems/quarter-turn-descent.toml",
        "--certify-not",
        "L^2",
    ]);
    if code != 0 || !certified.contains("certificate: ") {
        problems.push(format!("quotient-class --certify-not L^2 exited {code}"));
    }
    if elapsed > CASE_LIMIT {
        problems.push(format!("demo took {elapsed:?}"));
    }
    verdict(
        problems,
        format!("class, conic, definite form, certificate and p^2 counts in {elapsed:?}"),
    )
}

/// Points of `uv = w²` over `F_q`, `q ∈ {p, p²}` with `F_{p²} = F_p[s]/(s² - n)`.
fn cone_points(q: u64) -> u64 {
    let (p, square) = match q {
        9 => (3u64, true),
        p => (p, false),
    };
    let elems: Vec<(u64, u64)> = if square {
        (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect()
    } else {
        (0..p).map(|a| (a, 0)).collect()
    };
    let nonresidue = (2..p).find(|n| (1..p).all(|x| x * x % p != *n)).unwrap_or(2);
    let mul = |(a, b): (u64, u64), (c, d): (u64, u64)| {
        ((a * c + nonresidue * b * d) % p, (a * d + b * c) % p)
    };
    let mut n = 0;
    for &u in &elems {
        for &v in &elems {
            for &w in &elems {
                if mul(u, v) == mul(w, w) {
                    n += 1;
                }
            }
        }
    }
    n
}

fn criterion_4() -> Verdict {
    let mut problems = Vec::new();
    let registry = CounterRegistry::with_budget(50_000_000);
    let twisted = registry.get("twisted").expect("twisted counter");
    let mut cases: Vec<Case> = split_battery();
    let split_count = cases.len();
    cases.extend(prime_power_battery());
    let (mut checked, mut skipped) = (0, 0);
    for c in &cases {
        for p in [3u64, 5] {
            if c.action.group().size() % p == 0 {
                skipped += 1;
                continue;
            }
            let Ok(ctx) = SpecializationContext::new(c.action.field(), p) else {
                skipped += 1;
                continue;
            };
            let target = CountTarget::Linear(&c.action);
            let expected = BigInt::from(ctx.q).pow(c.action.dim() as u32);
            match twisted.count(&target, Stratum::Full, ctx.q) {
                Ok(n) if BigInt::from(n) == expected => checked += 1,
                Ok(n) => problems.push(format!("{} at q = {}: {n} != {expected}", c.name, ctx.q)),
                Err(e) => problems.push(format!("{} at q = {}: {e}", c.name, ctx.q)),
            }
        }
    }

    let q = Field::rational();
    let sign = GroupAction::cyclic(
        &q,
        kquot_core::exact::Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]),
        2,
    )
    .expect("valid action");
    match invariant_presentation(&sign) {
        Ok(pres) => {
            if pres.generators.len() != 3 || pres.relations.len() != 1 {
                problems.push(format!("presentation {pres}"));
            }
            for q in [3u64, 5, 7, 9] {
                let n = count_affine_points(&pres.relations, 3, q, 1_000_000);
                let oracle = cone_points(q);
                if n != Ok((q * q) as u128) || oracle != q * q {
                    problems.push(format!("cone over F_{q}: {n:?}, oracle {oracle}"));
                }
            }
        }
        Err(e) => problems.push(format!("A^2/(+-1): {e}")),
    }

    let (mut all_three, mut pairs, mut single, mut split_three) = (0, 0, 0, 0);
    for (i, c) in cases.iter().enumerate() {
        let target = CountTarget::Linear(&c.action);
        let supported = registry.iter().filter(|k| k.supports(&target)).count();
        let mut best: (u64, Vec<(&str, u128)>) = (0, Vec::new());
        for p in [3u64, 5, 7, 11, 13] {
            if c.action.group().size() % p == 0 {
                continue;
            }
            let Ok(ctx) = SpecializationContext::new(c.action.field(), p) else {
                continue;
            };
            if ctx.q > 81 {
                continue;
            }
            let mut seen = Vec::new();
            for counter in registry.iter().filter(|k| k.supports(&target)) {
                match counter.count(&target, Stratum::Full, ctx.q) {
                    Ok(n) => seen.push((counter.method().name(), n)),
                    Err(kquot_core::oracle::OracleError::TooLarge { .. }) => {}
                    Err(e) => problems.push(format!("{} {} at q = {}: {e}", c.name, counter.method(), ctx.q)),
                }
            }
            if seen.windows(2).any(|w| w[0].1 != w[1].1) {
                problems.push(format!("{} at q = {}: {seen:?}", c.name, ctx.q));
            }
            if seen.len() > best.1.len() {
                best = (ctx.q, seen);
            }
            if best.1.len() == supported {
                break;
            }
        }
        match best.1.len() {
            3 => all_three += 1,
            2 => pairs += 1,
            _ => single += 1,
        }
        if i < split_count && best.1.len() == 3 {
            split_three += 1;
        }
        if supported == 3 && best.1.len() < 3 {
            problems.push(format!("{}: only {:?} ran", c.name, best.1));
        }
    }
    if split_three == 0 {
        problems.push("no split case was counted three ways".into());
    }
    verdict(
        problems,
        format!(
            "{checked} twisted counts = q^dim ({skipped} skipped: p | |G| or p ramified); \
             uv = w^2 has q^2 points for q = 3, 5, 7, 9; \
             three paths agree on {all_three} cases ({split_three} split), two on {pairs}, \
             {single} beyond the enumeration budget checked by the twisted count only"
        ),
    )
}

fn verify_fixed_point(dd: &DescentDatum, v: [i64; 4]) -> bool {
    let k = dd.field();
    let z = k.generator();
    let comp = |a: i64, b: i64| -> FieldElem { k.from_int(a) + z.clone() * k.from_int(b) };
    let (v0, v1) = (comp(v[0], v[1]), comp(v[2], v[3]));
    let m = dd.matrix();
    let (c0, c1) = (v0.conj().unwrap(), v1.conj().unwrap());
    let w0 = m.get(0, 0) * &c0 + m.get(0, 1) * &c1;
    let w1 = m.get(1, 0) * &c0 + m.get(1, 1) * &c1;
    (&v0 * &w1 - &v1 * &w0).is_zero() && v != [0; 4]
}

fn criterion_5() -> Verdict {
    let data = descent_battery();
    let mut problems = Vec::new();
    if data.len() < 12 {
        problems.push(format!("only {} data", data.len()));
    }
    let mut pairs = std::collections::BTreeSet::new();
    let (mut split, mut nonsplit) = (0, 0);
    for dd in &data {
        let (d, c) = descended_symbol(dd);
        pairs.insert((d, c));
        if ![1, -1, 2, -2].contains(&c) {
            problems.push(format!("c = {c}"));
        }
        let hilbert_split = relevant_places(d, c).iter().all(|&v| hilbert_symbol(d, c, v) == 1);
        match quaternary_fixed_point_test(dd, DEFAULT_QUATERNARY_HEIGHT, DEFAULT_QUATERNARY_BUDGET) {
            Ok(v) => {
                if v.has_solution() != hilbert_split {
                    problems.push(format!("(d, c) = ({d}, {c}): {v} but Hilbert says split = {hilbert_split}"));
                }
                if let QuaternaryVerdict::Solution { vector } = v {
                    if !verify_fixed_point(dd, vector) {
                        problems.push(format!("(d, c) = ({d}, {c}): {vector:?} is not fixed"));
                    }
                    split += 1;
                } else {
                    nonsplit += 1;
                }
            }
            Err(e) => problems.push(format!("(d, c) = ({d}, {c}): undecided, {e}")),
        }
    }
    for d in [-1i64, 2, -2, -3, 5] {
        for c in [1i64, -1, 2, -2] {
            if !pairs.contains(&(d, c)) {
                problems.push(format!("(d, c) = ({d}, {c}) not covered"));
            }
        }
    }
    verdict(
        problems,
        format!(
            "{} data, {split} with a fixed point, {nonsplit} without, 0 mismatches",
            data.len()
        ),
    )
}

fn run_properties(props: Vec<support::Property>) -> (Vec<String>, u32, Duration) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut cases = 0;
    for p in props {
        match p.run() {
            Ok(n) => cases += n,
            Err(e) => problems.push(format!("{}: {e}", p.name)),
        }
    }
    (problems, cases, start.elapsed())
}

fn criterion_6() -> Verdict {
    let (problems, cases, elapsed) = run_properties(support::arithmetic_properties());
    verdict(
        problems,
        format!("product formula on 50 pairs, local formulas vs search on 100 pairs, split points verified ({cases} cases, {elapsed:?})"),
    )
}

fn criterion_7() -> Verdict {
    let (mut problems, cases, elapsed) = run_properties(support::algebraic_properties());
    if cases < 1000 {
        problems.push(format!("only {cases} cases"));
    }
    if elapsed > PROPERTY_LIMIT {
        problems.push(format!("took {elapsed:?}"));
    }
    verdict(problems, format!("{cases} randomized cases in {elapsed:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("split battery", criterion_1),
        ("prime-power battery", criterion_2),
        ("quarter-turn descent end to end", criterion_3),
        ("counting concordance", criterion_4),
        ("descent rule gate", criterion_5),
        ("number-theory properties", criterion_6),
        ("algebraic property suites", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
