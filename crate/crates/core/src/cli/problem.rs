//! Problem files: a TOML document describing the field, the action and the task.
//!
//! ```toml
//! [field]
//! kind = "cyclotomic"   # "rational" | "cyclotomic" (with m) | "quadratic" (with d)
//! m = 4
//!
//! [group]
//! orders = [4]
//! generators = [[["z", "0"], ["0", "-1"]]]
//!
//! [task]
//! route = "split"
//! certify_not = "L^2"
//! check_counts = [5, 13]
//! ```
//!
//! A `[descent]` table (`d`, `matrix`, optional `c`) replaces `[group]` for an
//! action of `σ: v ↦ M·v̄` on `Q(√d)²`; the field is then Q.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::exact::rat::render_rat;
use crate::exact::{parse_elem, ExactError, Field, FieldElem, Matrix};
use crate::kring::{parse_kexpr, KExpr, KringError};
use crate::quotient::{DescentDatum, QuotientError, QuotientProblem};
use crate::repgroup::{AbelianGroup, GroupAction, RepError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rational,
    Cyclotomic(u64),
    Quadratic(i64),
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<Field, ExactError> {
        match *self {
            FieldDescriptor::Rational => Ok(Field::rational()),
            FieldDescriptor::Cyclotomic(m) => Field::cyclotomic(m),
            FieldDescriptor::Quadratic(d) => Field::quadratic(d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub orders: Vec<u64>,
    /// Row-major entry strings, one matrix per cyclic factor.
    pub generators: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentSpec {
    pub d: i64,
    pub matrix: Vec<Vec<String>>,
    /// Expected value of `M·M̄`, checked when given.
    pub c: Option<String>,
}

/// Options a problem file may fix; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaskSpec {
    pub route: Option<String>,
    pub certify_not: Option<String>,
    pub check_counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: FieldDescriptor,
    pub group: Option<GroupSpec>,
    pub descent: Option<DescentSpec>,
    pub task: TaskSpec,
    action: Option<GroupAction>,
    datum: Option<DescentDatum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Validation {
        violations: Vec<String>,
    },
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            ProblemError::Validation { violations } => {
                write!(f, "invalid problem: {}", violations.join("; "))
            }
        }
    }
}

impl std::error::Error for ProblemError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    field: Option<Spanned<RawField>>,
    group: Option<Spanned<RawGroup>>,
    descent: Option<Spanned<RawDescent>>,
    task: Option<RawTask>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    kind: Spanned<String>,
    m: Option<u64>,
    d: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    orders: Vec<u64>,
    generators: Vec<Vec<Vec<Spanned<String>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescent {
    d: i64,
    matrix: Vec<Vec<Spanned<String>>>,
    c: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    route: Option<String>,
    certify_not: Option<Spanned<String>>,
    #[serde(default)]
    check_counts: Vec<u64>,
}

#[derive(Serialize)]
struct OutProblem<'a> {
    field: OutField,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<&'a GroupSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    descent: Option<&'a DescentSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    task: Option<&'a TaskSpec>,
}

#[derive(Serialize)]
struct OutField {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("group", 2)?;
        st.serialize_field("orders", &self.orders)?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

impl Serialize for DescentSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("descent", 3)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("matrix", &self.matrix)?;
        if let Some(c) = &self.c {
            st.serialize_field("c", c)?;
        }
        st.end()
    }
}

impl Serialize for TaskSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("task", 3)?;
        if let Some(r) = &self.route {
            st.serialize_field("route", r)?;
        }
        if let Some(c) = &self.certify_not {
            st.serialize_field("certify_not", c)?;
        }
        if !self.check_counts.is_empty() {
            st.serialize_field("check_counts", &self.check_counts)?;
        }
        st.end()
    }
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> ProblemError {
        let (line, column) = line_column(self.text, offset);
        ProblemError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Offset of the first character inside a quoted string value.
    fn inner_start(&self, span: &Range<usize>) -> usize {
        let quoted = self.text[span.clone()].starts_with(['"', '\'']);
        span.start + usize::from(quoted)
    }

    fn elem(&self, s: &Spanned<String>, field: &Field) -> Result<FieldElem, ProblemError> {
        parse_elem(s.get_ref(), field).map_err(|e| match e {
            ExactError::Syntax { offset, msg } => self.at(
                self.inner_start(&s.span()) + offset,
                format!("bad entry \"{}\": {msg}", s.get_ref()),
            ),
            other => self.at(s.span().start, format!("bad entry \"{}\": {other}", s.get_ref())),
        })
    }

    fn matrix(
        &self,
        rows: &[Vec<Spanned<String>>],
        field: &Field,
        span: Range<usize>,
    ) -> Result<Matrix, ProblemError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| self.elem(s, field)).collect())
            .collect::<Result<Vec<Vec<FieldElem>>, _>>()?;
        let n = parsed.len();
        if n == 0 || parsed.iter().any(|r| r.len() != n) {
            return Err(self.at(span.start, "matrix must be square and nonempty"));
        }
        Matrix::from_rows(field, parsed).map_err(|e| self.at(span.start, e.to_string()))
    }
}

fn strings(rows: &[Vec<Spanned<String>>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.get_ref().clone()).collect())
        .collect()
}

fn rep_violations(e: RepError) -> ProblemError {
    match e {
        RepError::Invalid(v) => ProblemError::Validation { violations: v },
        other => ProblemError::Validation {
            violations: vec![other.to_string()],
        },
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, ProblemError> {
    let cx = Ctx { text };
    let raw: RawProblem = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        cx.at(offset, e.message().trim().to_string())
    })?;

    let field = match &raw.field {
        None => FieldDescriptor::Rational,
        Some(f) => {
            let span = f.span();
            let f = f.get_ref();
            match (f.kind.get_ref().as_str(), f.m, f.d) {
                ("rational", None, None) => FieldDescriptor::Rational,
                ("cyclotomic", Some(m), None) => FieldDescriptor::Cyclotomic(m),
                ("quadratic", None, Some(d)) => FieldDescriptor::Quadratic(d),
                ("rational" | "cyclotomic" | "quadratic", ..) => {
                    return Err(cx.at(
                        span.start,
                        "field needs m for cyclotomic, d for quadratic, neither for rational",
                    ))
                }
                (other, ..) => {
                    return Err(cx.at(
                        f.kind.span().start,
                        format!("unknown field kind \"{other}\"; expected rational, cyclotomic or quadratic"),
                    ))
                }
            }
        }
    };
    let k = field.build().map_err(|e| {
        cx.at(raw.field.as_ref().map_or(0, |f| f.span().start), e.to_string())
    })?;

    let (group, action) = match &raw.group {
        None => (None, None),
        Some(g) => {
            let span = g.span();
            let g = g.get_ref();
            let mats = g
                .generators
                .iter()
                .map(|m| cx.matrix(m, &k, span.clone()))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = mats.first().map_or(0, |m| m.rows());
            let grp = AbelianGroup::new(g.orders.clone()).map_err(rep_violations)?;
            let action = GroupAction::checked(grp, &k, dim, mats).map_err(rep_violations)?;
            let spec = GroupSpec {
                orders: g.orders.clone(),
                generators: g.generators.iter().map(|m| strings(m)).collect(),
            };
            (Some(spec), Some(action))
        }
    };

    let (descent, datum) = match &raw.descent {
        None => (None, None),
        Some(d) => {
            let span = d.span();
            let d = d.get_ref();
            if field != FieldDescriptor::Rational {
                return Err(ProblemError::Validation {
                    violations: vec!["a descent datum is defined over the rational field".into()],
                });
            }
            let kd = Field::quadratic(d.d).map_err(|e| cx.at(span.start, e.to_string()))?;
            let m = cx.matrix(&d.matrix, &kd, span.clone())?;
            let datum = DescentDatum::new(d.d, m).map_err(|e| ProblemError::Validation {
                violations: vec![e.to_string()],
            })?;
            if let Some(c) = &d.c {
                let expected = cx.elem(c, &Field::rational())?;
                let got = render_rat(datum.c());
                if expected.as_rational().map(|r| render_rat(&r)) != Some(got.clone()) {
                    return Err(ProblemError::Validation {
                        violations: vec![format!(
                            "M * conj(M) = {got} * Id, but c = {} was declared",
                            c.get_ref()
                        )],
                    });
                }
            }
            let spec = DescentSpec {
                d: d.d,
                matrix: strings(&d.matrix),
                c: d.c.as_ref().map(|c| c.get_ref().clone()),
            };
            (Some(spec), Some(datum))
        }
    };

    match (&action, &datum) {
        (None, None) => {
            return Err(ProblemError::Validation {
                violations: vec!["a [group] or a [descent] table is required".into()],
            })
        }
        (Some(_), Some(_)) => {
            return Err(ProblemError::Validation {
                violations: vec!["give either [group] or [descent], not both".into()],
            })
        }
        _ => {}
    }

    let task = match raw.task {
        None => TaskSpec::default(),
        Some(t) => {
            if let Some(c) = &t.certify_not {
                parse_kexpr(c.get_ref(), &k).map_err(|e| match e {
                    KringError::Parse { offset, msg } => cx.at(
                        cx.inner_start(&c.span()) + offset,
                        format!("bad expression \"{}\": {msg}", c.get_ref()),
                    ),
                    other => cx.at(c.span().start, other.to_string()),
                })?;
            }
            TaskSpec {
                route: t.route,
                certify_not: t.certify_not.map(|c| c.into_inner()),
                check_counts: t.check_counts,
            }
        }
    };

    Ok(ProblemSpec {
        field,
        group,
        descent,
        task,
        action,
        datum,
    })
}

impl ProblemSpec {
    /// A spec for an already-built action, with entries rendered in the `z` grammar.
    pub fn from_action(field: FieldDescriptor, action: GroupAction) -> Self {
        let generators = action
            .generators()
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).render()).collect())
                    .collect()
            })
            .collect();
        ProblemSpec {
            field,
            group: Some(GroupSpec {
                orders: action.group().orders().to_vec(),
                generators,
            }),
            descent: None,
            task: TaskSpec::default(),
            action: Some(action),
            datum: None,
        }
    }

    pub fn from_descent(datum: DescentDatum) -> Self {
        let m = datum.matrix();
        let matrix = (0..2)
            .map(|i| (0..2).map(|j| m.get(i, j).render()).collect())
            .collect();
        ProblemSpec {
            field: FieldDescriptor::Rational,
            group: None,
            descent: Some(DescentSpec {
                d: datum.d(),
                matrix,
                c: Some(render_rat(datum.c())),
            }),
            task: TaskSpec::default(),
            action: None,
            datum: Some(datum),
        }
    }

    /// The field the classes live over.
    pub fn base(&self) -> Field {
        match &self.action {
            Some(a) => a.field().clone(),
            None => Field::rational(),
        }
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    pub fn datum(&self) -> Option<&DescentDatum> {
        self.datum.as_ref()
    }

    pub fn problem(&self) -> QuotientProblem {
        QuotientProblem {
            action: self.action.clone(),
            semilinear: None,
            descent: self.datum.clone(),
        }
    }

    pub fn parse_expr(&self, text: &str) -> Result<KExpr, KringError> {
        parse_kexpr(text, &self.base())
    }

    /// TOML text that parses back to an equal spec.
    pub fn to_toml(&self) -> String {
        let (kind, m, d) = match self.field {
            FieldDescriptor::Rational => ("rational", None, None),
            FieldDescriptor::Cyclotomic(m) => ("cyclotomic", Some(m), None),
            FieldDescriptor::Quadratic(d) => ("quadratic", None, Some(d)),
        };
        let task = &self.task;
        let out = OutProblem {
            field: OutField { kind, m, d },
            group: self.group.as_ref(),
            descent: self.descent.as_ref(),
            task: (task != &TaskSpec::default()).then_some(task),
        };
        toml::to_string(&out).expect("plain data serializes")
    }
}

impl From<QuotientError> for ProblemError {
    fn from(e: QuotientError) -> Self {
        ProblemError::Validation {
            violations: vec![e.to_string()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROTATION: &str = r#"
[field]
kind = "rational"

[group]
orders = [4]
generators = [[["0", "-1"], ["1", "0"]]]
"#;

    #[test]
    fn documented_specs() {
        let s = parse_problem(ROTATION).unwrap();
        assert_eq!(s.action().unwrap().dim(), 2);
        assert_eq!(s.field, FieldDescriptor::Rational);

        let diag = r#"
[field]
kind = "cyclotomic"
m = 4
[group]
orders = [4]
generators = [[["z", "0"], ["0", "-1"]]]
"#;
        let s = parse_problem(diag).unwrap();
        assert_eq!(s.base().degree(), 2);
    }

    #[test]
    fn malformed_entry_has_position() {
        let bad = ROTATION.replace("\"-1\"], [\"1\"", "\"1/+2\"], [\"1\"");
        match parse_problem(&bad) {
            Err(ProblemError::Parse { line, column, .. }) => {
                assert_eq!(line, 7);
                assert!(column > 17, "column {column}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn toml_errors_have_position() {
        let e = parse_problem("[group]\norders = [4\n").unwrap_err();
        assert!(matches!(e, ProblemError::Parse { line: 2 | 3, .. }), "{e}");
        let e = parse_problem("[field]\nkind = \"real\"\n").unwrap_err();
        assert!(matches!(e, ProblemError::Parse { line: 2, column: 8, .. }), "{e}");
    }

    #[test]
    fn validation_lists_violations() {
        let bad = ROTATION.replace("orders = [4]", "orders = [3]");
        match parse_problem(&bad) {
            Err(ProblemError::Validation { violations }) => {
                assert!(violations[0].contains("g^3 = 1"), "{violations:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let s = parse_problem(ROTATION).unwrap();
        assert_eq!(parse_problem(&s.to_toml()).unwrap(), s);
        let desc = r#"
[descent]
d = -1
matrix = [["0", "1"], ["-1", "0"]]
c = "-1"
[task]
certify_not = "L^2"
check_counts = [3, 5]
"#;
        let s = parse_problem(desc).unwrap();
        assert_eq!(s.datum().unwrap().group_order(), Some(4));
        assert_eq!(parse_problem(&s.to_toml()).unwrap(), s);
        let wrong_c = desc.replace("c = \"-1\"", "c = \"1\"");
        assert!(matches!(parse_problem(&wrong_c), Err(ProblemError::Validation { .. })));
    }
}
