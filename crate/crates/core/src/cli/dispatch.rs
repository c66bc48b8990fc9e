//! Runs a problem through the route registry and the oracles, producing a document.

use num_bigint::BigInt;

use super::document::{ExitStatus, ResultDocument};
use super::problem::ProblemSpec;
use crate::kring::{specialize_count, KExpr, SpecializationContext};
use crate::oracle::hilbert::relevant_places;
use crate::oracle::{
    conic_rational_point, hilbert_symbol, quaternary_fixed_point_test, CountReport, CountTarget,
    CounterRegistry, OracleError, PointCounter, QuaternaryForm, SemilinearElement, Stratum,
    DEFAULT_QUATERNARY_BUDGET, DEFAULT_QUATERNARY_HEIGHT,
};
use crate::oracle::DEFAULT_CONIC_HEIGHT;
use crate::quotient::{
    descended_symbol, inequality_certificate, CertificateOutcome, DescentDatum, RouteRegistry,
};

/// Command-line choices layered over the problem file's `[task]` table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DispatchOptions {
    pub route: Option<String>,
    pub certify_not: Option<String>,
    pub check_counts: Vec<u64>,
    pub trace: bool,
    /// Search height or enumeration budget, depending on the command.
    pub bound: Option<u64>,
}

impl DispatchOptions {
    fn merged(&self, spec: &ProblemSpec) -> DispatchOptions {
        DispatchOptions {
            route: self.route.clone().or_else(|| spec.task.route.clone()),
            certify_not: self
                .certify_not
                .clone()
                .or_else(|| spec.task.certify_not.clone()),
            check_counts: if self.check_counts.is_empty() {
                spec.task.check_counts.clone()
            } else {
                self.check_counts.clone()
            },
            trace: self.trace,
            bound: self.bound,
        }
    }
}

/// Fills route, class and trace; `None` when no class could be derived.
fn derive(spec: &ProblemSpec, opts: &DispatchOptions, doc: &mut ResultDocument) -> Option<KExpr> {
    let registry = RouteRegistry::standard();
    match registry.run(&spec.problem(), opts.route.as_deref()) {
        Ok((name, (class, trace))) => {
            doc.route = Some(name.into());
            doc.expression = Some(class.render());
            if opts.trace {
                doc.trace = Some(trace.render());
            }
            Some(class)
        }
        Err(e) => {
            doc.route = opts.route.clone();
            doc.quotient_failure(&e);
            None
        }
    }
}

fn certify(spec: &ProblemSpec, class: &KExpr, other: &str, doc: &mut ResultDocument) {
    let y = match spec.parse_expr(other) {
        Ok(y) => y,
        Err(e) => {
            doc.fail(ExitStatus::ParseError, "input", format!("--certify-not: {e}"));
            return;
        }
    };
    match inequality_certificate(class, &y) {
        Ok(CertificateOutcome::Certificate(c)) => doc.certificate = Some(c.render()),
        Ok(CertificateOutcome::Equal) => doc.fail(
            ExitStatus::Inconclusive,
            "certificate",
            format!("the class equals {}", y.render()),
        ),
        Ok(CertificateOutcome::Unknown { reason }) => {
            doc.fail(ExitStatus::Inconclusive, "certificate", format!("unknown: {reason}"))
        }
        Err(e) => doc.quotient_failure(&e),
    }
}

fn semilinear_elements(dd: &DescentDatum) -> Result<Vec<SemilinearElement>, OracleError> {
    dd.semilinear_elements()
        .map_err(|e| OracleError::UnsupportedAction(e.to_string()))
}

/// Counts with each given counter and compares against the class at `q`.
fn count_against(
    spec: &ProblemSpec,
    class: &KExpr,
    counters: &[&dyn PointCounter],
    qs: &[u64],
    doc: &mut ResultDocument,
) {
    let elements = match spec.datum().map(semilinear_elements).transpose() {
        Ok(e) => e,
        Err(e) => return doc.oracle_failure("count", &e),
    };
    let target = match (spec.action(), spec.datum(), &elements) {
        (Some(a), _, _) => CountTarget::Linear(a),
        (None, Some(dd), Some(els)) => CountTarget::Semilinear {
            ext: dd.field(),
            elements: els,
        },
        _ => unreachable!("a parsed spec has an action or a datum"),
    };
    let mut skipped = Vec::new();
    for &q in qs {
        let predicted = match SpecializationContext::for_q(&spec.base(), q)
            .and_then(|ctx| specialize_count(class, &ctx))
        {
            Ok(n) => n,
            Err(e) => {
                doc.fail(ExitStatus::HypothesisViolation, "specialization", e.to_string());
                continue;
            }
        };
        for c in counters {
            if !c.supports(&target) {
                skipped.push(format!("{} at q = {q}: not available for this action", c.method()));
                continue;
            }
            match c.count(&target, Stratum::Full, q) {
                Ok(n) => doc.counts.push(CountReport::new(c.method(), q, n, predicted.clone())),
                Err(e @ (OracleError::UnsupportedAction(_) | OracleError::TooLarge { .. })) => {
                    skipped.push(format!("{} at q = {q}: {e}", c.method()))
                }
                Err(e) => doc.oracle_failure("count", &e),
            }
        }
    }
    if !skipped.is_empty() {
        doc.section("skipped counts", skipped);
    }
    if doc.counts.iter().any(|r| !r.matched) {
        doc.fail(
            ExitStatus::Inconclusive,
            "count-mismatch",
            "an observed count differs from the class",
        );
    }
}

fn registry(opts: &DispatchOptions) -> CounterRegistry {
    match opts.bound {
        Some(b) => CounterRegistry::with_budget(b as u128),
        None => CounterRegistry::standard(),
    }
}

/// `quotient-class`: the class, with the requested certificate and count checks.
pub fn dispatch(spec: &ProblemSpec, opts: &DispatchOptions) -> ResultDocument {
    let opts = opts.merged(spec);
    let mut doc = ResultDocument::default();
    let Some(class) = derive(spec, &opts, &mut doc) else {
        return doc;
    };
    if let Some(other) = &opts.certify_not {
        certify(spec, &class, other, &mut doc);
    }
    if !opts.check_counts.is_empty() {
        let reg = registry(&opts);
        let counters: Vec<&dyn PointCounter> = reg.iter().collect();
        count_against(spec, &class, &counters, &opts.check_counts, &mut doc);
    }
    doc
}

/// `count`: one counting method at one `q`.
pub fn run_count(spec: &ProblemSpec, q: u64, method: &str, opts: &DispatchOptions) -> ResultDocument {
    let opts = opts.merged(spec);
    let mut doc = ResultDocument::default();
    let reg = registry(&opts);
    let Some(counter) = reg.get(method) else {
        doc.fail(
            ExitStatus::ParseError,
            "input",
            format!("unknown method {method}; expected one of {}", reg.names().join(", ")),
        );
        return doc;
    };
    let Some(class) = derive(spec, &opts, &mut doc) else {
        return doc;
    };
    count_against(spec, &class, &[counter], &[q], &mut doc);
    if doc.counts.is_empty() && doc.status == ExitStatus::Ok {
        doc.fail(
            ExitStatus::HypothesisViolation,
            "count",
            format!("{method} counting does not apply to this action"),
        );
    }
    doc
}

/// `specialize`: the point count predicted by the class at an odd prime.
pub fn run_specialize(spec: &ProblemSpec, p: u64, opts: &DispatchOptions) -> ResultDocument {
    let opts = opts.merged(spec);
    let mut doc = ResultDocument::default();
    let Some(class) = derive(spec, &opts, &mut doc) else {
        return doc;
    };
    match SpecializationContext::new(&spec.base(), p).and_then(|ctx| {
        specialize_count(&class, &ctx).map(|n| (ctx.q, n))
    }) {
        Ok((q, n)) => doc.section("specialization", vec![format!("p = {p}, q = {q}: {n}")]),
        Err(e) => doc.fail(ExitStatus::HypothesisViolation, "specialization", e.to_string()),
    }
    doc
}

/// `conic`: splitting status of `a x² + b y² = z²` over Q with its local symbols.
pub fn run_conic(a: i64, b: i64, bound: Option<u64>) -> ResultDocument {
    let mut doc = ResultDocument::default();
    match conic_rational_point(a, b, bound.unwrap_or(DEFAULT_CONIC_HEIGHT)) {
        Ok(s) => {
            let mut lines = vec![s.render_status()];
            for v in relevant_places(s.a, s.b) {
                lines.push(format!("({}, {})_{v} = {}", s.a, s.b, hilbert_symbol(s.a, s.b, v)));
            }
            doc.section(&format!("conic C({},{})", s.a, s.b), lines);
        }
        Err(e) => doc.oracle_failure("conic", &e),
    }
    doc
}

/// Class, conic, fixed-point form, certificate against `L^2` and point counts
/// for `σ(x, y) = (ȳ, -x̄)` on `Q(i)²`.
pub fn demo_example_1_2(opts: &DispatchOptions) -> ResultDocument {
    let dd = DescentDatum::gaussian_quarter_turn();
    let spec = ProblemSpec::from_descent(dd.clone());
    let mut doc = ResultDocument::default();
    let opts = DispatchOptions {
        route: Some("descent".into()),
        ..opts.clone()
    };
    let Some(class) = derive(&spec, &opts, &mut doc) else {
        return doc;
    };

    let (a, b) = descended_symbol(&dd);
    match conic_rational_point(a, b, opts.bound.unwrap_or(DEFAULT_CONIC_HEIGHT)) {
        Ok(s) => {
            if s.is_split() != Some(false) {
                doc.fail(ExitStatus::Inconclusive, "galois-descent-conic", "the conic splits");
            }
            doc.section(&format!("conic C({a},{b})"), vec![s.render_status()]);
        }
        Err(e) => doc.oracle_failure("galois-descent-conic", &e),
    }

    let height = opts.bound.unwrap_or(DEFAULT_QUATERNARY_HEIGHT);
    match QuaternaryForm::of(&dd).and_then(|form| {
        quaternary_fixed_point_test(&dd, height, DEFAULT_QUATERNARY_BUDGET).map(|v| (form, v))
    }) {
        Ok((form, verdict)) => {
            if verdict.has_solution() {
                doc.fail(ExitStatus::Inconclusive, "fixed-point-form", "sigma has a fixed point");
            }
            doc.section(
                "fixed points of sigma on P^1",
                vec![format!("{form} = 0"), verdict.to_string()],
            );
        }
        Err(e) => doc.oracle_failure("fixed-point-form", &e),
    }

    certify(&spec, &class, "L^2", &mut doc);

    let primes = [3u64, 5, 7, 13];
    let mut lines = Vec::new();
    for &p in &primes {
        let n = SpecializationContext::new(&spec.base(), p)
            .and_then(|ctx| specialize_count(&class, &ctx));
        match n {
            Ok(n) => {
                let square = BigInt::from(p * p);
                let verdict = if n == square { "= p^2" } else { "!= p^2" };
                lines.push(format!("p = {p}: {n} {verdict}"));
                if n != square {
                    doc.fail(ExitStatus::Inconclusive, "specialization", format!("p = {p}"));
                }
            }
            Err(e) => doc.fail(ExitStatus::HypothesisViolation, "specialization", e.to_string()),
        }
    }
    doc.section("point counts of the class", lines);
    let twisted = crate::oracle::counters::TwistedCounter;
    count_against(&spec, &class, &[&twisted], &primes, &mut doc);
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::problem::parse_problem;

    const ROT2: &str = r#"
[group]
orders = [4]
generators = [[["0", "-1", "0", "0"], ["1", "0", "0", "0"], ["0", "0", "0", "-1"], ["0", "0", "1", "0"]]]
"#;

    #[test]
    fn rotation_pair_counts() {
        let spec = parse_problem(ROT2).unwrap();
        let opts = DispatchOptions {
            check_counts: vec![3, 5],
            ..Default::default()
        };
        let doc = dispatch(&spec, &opts);
        assert_eq!(doc.expression.as_deref(), Some("1*L^4"), "{}", doc.render());
        assert_eq!(doc.route.as_deref(), Some("prime-power"));
        assert!(!doc.counts.is_empty());
        assert!(doc.counts.iter().all(|r| r.matched));
        assert_eq!(doc.status, ExitStatus::Ok, "{}", doc.render());
    }

    #[test]
    fn forced_split_route_fails() {
        let spec = parse_problem(ROT2).unwrap();
        let opts = DispatchOptions {
            route: Some("split".into()),
            ..Default::default()
        };
        let doc = dispatch(&spec, &opts);
        assert_eq!(doc.status.code(), 1);
        assert_eq!(doc.failures[0].anchor, "roots-of-unity-hypothesis");
        assert!(doc.failures[0].message.contains("roots of 1"));
    }

    #[test]
    fn demo_document() {
        let doc = demo_example_1_2(&DispatchOptions::default());
        let text = doc.render();
        assert_eq!(doc.status, ExitStatus::Ok, "{text}");
        assert!(text.contains("class: 1*L*C(-1,-1) - 1*C(-1,-1) + 1"));
        assert!(text.contains("non-split, ramified at: 2, inf"));
        assert!(text.contains("positive definite"));
        assert!(text.contains("certificate: "));
        assert!(text.contains("p = 13: 169 = p^2"));
        assert_eq!(doc.render(), demo_example_1_2(&DispatchOptions::default()).render());
    }

    #[test]
    fn conic_command() {
        let doc = run_conic(-1, -1, None);
        assert!(doc.render().contains("non-split, ramified at: 2, inf"));
        let doc = run_conic(1, 3, None);
        assert!(doc.render().contains("split, point"));
    }
}
