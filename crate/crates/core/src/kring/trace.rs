use std::fmt;

use super::expr::KExpr;

/// One rewrite: the rule applied, the fact licensing it, and the expression before and after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub anchor: String,
    pub before: KExpr,
    pub after: KExpr,
}

/// Ordered rewrite steps; each step starts where the previous one ended.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DerivationTrace {
    steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Expression after the last step.
    pub fn current(&self) -> Option<&KExpr> {
        self.steps.last().map(|s| &s.after)
    }

    pub fn push(&mut self, rule: &str, anchor: &str, before: KExpr, after: KExpr) {
        self.steps.push(TraceStep {
            rule: rule.to_string(),
            anchor: anchor.to_string(),
            before,
            after,
        });
    }

    /// Appends a step starting from the current expression (or `start` when empty).
    pub fn advance(&mut self, rule: &str, anchor: &str, start: &KExpr, after: KExpr) {
        let before = self.current().cloned().unwrap_or_else(|| start.clone());
        self.push(rule, anchor, before, after);
    }

    /// Appends another trace; a bridging step is inserted if the two do not chain.
    pub fn extend(&mut self, other: DerivationTrace) {
        if let (Some(cur), Some(first)) = (self.current().cloned(), other.steps.first()) {
            if cur != first.before {
                self.push("resume", "subderivation", cur, first.before.clone());
            }
        }
        self.steps.extend(other.steps);
    }

    /// Whether every step's `after` equals the next step's `before`.
    pub fn is_chained(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].after == w[1].before)
    }

    pub fn anchors(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.anchor.as_str()).collect()
    }

    pub fn render(&self) -> String {
        if self.steps.is_empty() {
            return "trace: (empty)".into();
        }
        let mut out = String::from("trace:");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "\nstep {}: {} [{}] : {} => {}",
                i + 1,
                s.rule,
                s.anchor,
                s.before,
                s.after
            ));
        }
        out
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Field;

    #[test]
    fn chaining_and_rendering() {
        let q = Field::rational();
        let mut t = DerivationTrace::new();
        assert_eq!(t.render(), "trace: (empty)");
        t.advance("start", "origin-stratum", &KExpr::zero(&q), KExpr::one(&q));
        t.advance("add", "punctured-fibration", &KExpr::zero(&q), KExpr::lefschetz(&q));
        assert!(t.is_chained());
        assert_eq!(
            t.render(),
            "trace:\nstep 1: start [origin-stratum] : 0 => 1\nstep 2: add [punctured-fibration] : 1 => 1*L"
        );
    }
}
