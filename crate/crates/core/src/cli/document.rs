//! The printed outcome of one invocation, as text or as canonical JSON.

use serde::Serialize;

use crate::oracle::{CountReport, OracleError};
use crate::quotient::QuotientError;

use super::problem::ProblemError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Ok,
    HypothesisViolation,
    Inconclusive,
    ParseError,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::HypothesisViolation => 1,
            ExitStatus::Inconclusive => 2,
            ExitStatus::ParseError => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExitStatus::Ok => "ok",
            ExitStatus::HypothesisViolation => "hypothesis-violation",
            ExitStatus::Inconclusive => "inconclusive",
            ExitStatus::ParseError => "parse-error",
        }
    }

    /// The worse of two statuses.
    pub fn max(self, o: ExitStatus) -> ExitStatus {
        if o.code() > self.code() {
            o
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub anchor: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub heading: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    /// Canonical text of the class; parses back to the same normal form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<CountReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
    pub status: ExitStatus,
}

impl Default for ResultDocument {
    fn default() -> Self {
        ResultDocument {
            route: None,
            expression: None,
            trace: None,
            sections: Vec::new(),
            certificate: None,
            counts: Vec::new(),
            failures: Vec::new(),
            status: ExitStatus::Ok,
        }
    }
}

pub fn quotient_status(e: &QuotientError) -> ExitStatus {
    match e {
        QuotientError::Oracle(o) => oracle_status(o),
        e if e.is_hypothesis_violation() => ExitStatus::HypothesisViolation,
        _ => ExitStatus::Inconclusive,
    }
}

pub fn oracle_status(e: &OracleError) -> ExitStatus {
    match e {
        OracleError::Invalid(_)
        | OracleError::BadReduction { .. }
        | OracleError::UnsupportedAction(_)
        | OracleError::Kring(_)
        | OracleError::Rep(_) => ExitStatus::HypothesisViolation,
        _ => ExitStatus::Inconclusive,
    }
}

impl ResultDocument {
    /// Records a failure and lowers the status accordingly.
    pub fn fail(&mut self, status: ExitStatus, anchor: &str, message: impl Into<String>) {
        self.failures.push(Failure {
            anchor: anchor.into(),
            message: message.into(),
        });
        self.status = self.status.max(status);
    }

    pub fn quotient_failure(&mut self, e: &QuotientError) {
        self.fail(quotient_status(e), e.anchor(), e.to_string());
    }

    pub fn oracle_failure(&mut self, anchor: &str, e: &OracleError) {
        self.fail(oracle_status(e), anchor, e.to_string());
    }

    pub fn problem_failure(e: &ProblemError) -> Self {
        let mut doc = ResultDocument::default();
        doc.fail(ExitStatus::ParseError, "input", e.to_string());
        doc
    }

    pub fn section(&mut self, heading: &str, lines: Vec<String>) {
        self.sections.push(Section {
            heading: heading.into(),
            lines,
        });
    }

    /// Line-oriented text; byte-identical for identical documents.
    pub fn render(&self) -> String {
        let mut out = Vec::new();
        if let Some(r) = &self.route {
            out.push(format!("route: {r}"));
        }
        if let Some(x) = &self.expression {
            out.push(format!("class: {x}"));
        }
        if let Some(t) = &self.trace {
            out.push(t.clone());
        }
        for s in &self.sections {
            out.push(format!("{}:", s.heading));
            for l in &s.lines {
                out.push(format!("  {l}"));
            }
        }
        if let Some(c) = &self.certificate {
            out.push(c.clone());
        }
        if !self.counts.is_empty() {
            out.push("counts:".into());
            out.push(CountReport::table(&self.counts));
        }
        for f in &self.failures {
            out.push(format!("error [{}]: {}", f.anchor, f.message));
        }
        out.push(format!(
            "status: {} (exit {})",
            self.status.name(),
            self.status.code()
        ));
        let mut text = out.join("\n");
        text.push('\n');
        text
    }

    /// Pretty JSON with a fixed key order.
    pub fn render_canonical(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_stable() {
        let mut doc = ResultDocument {
            route: Some("split".into()),
            expression: Some("1*L^2".into()),
            trace: Some("trace: (empty)".into()),
            ..Default::default()
        };
        assert_eq!(
            doc.render(),
            "route: split\nclass: 1*L^2\ntrace: (empty)\nstatus: ok (exit 0)\n"
        );
        doc.fail(ExitStatus::HypothesisViolation, "roots-of-unity-hypothesis", "missing");
        doc.fail(ExitStatus::Inconclusive, "x", "y");
        assert_eq!(doc.status.code(), 2);
        assert!(doc.render().contains("error [roots-of-unity-hypothesis]: missing\n"));
        let json: serde_json::Value = serde_json::from_str(&doc.render_canonical()).unwrap();
        assert_eq!(json["status"], "inconclusive");
        assert_eq!(json["expression"], "1*L^2");
    }
}
