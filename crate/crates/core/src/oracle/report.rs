//! Observed point counts next to the counts predicted by a class.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    TwistedOrbit,
    InvariantPresentation,
    DirectEnumeration,
}

impl CountMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CountMethod::TwistedOrbit => "twisted",
            CountMethod::InvariantPresentation => "invariant",
            CountMethod::DirectEnumeration => "exhaustive",
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub method: CountMethod,
    pub q: u64,
    pub observed: u128,
    #[serde(serialize_with = "serialize_big")]
    pub predicted: BigInt,
    pub matched: bool,
}

fn serialize_big<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl CountReport {
    pub fn new(method: CountMethod, q: u64, observed: u128, predicted: BigInt) -> Self {
        let matched = BigInt::from(observed) == predicted;
        CountReport {
            method,
            q,
            observed,
            predicted,
            matched,
        }
    }

    /// Fixed-column table, one row per report.
    pub fn table(reports: &[CountReport]) -> String {
        let mut out = format!(
            "{:<12} {:>6} {:>14} {:>14} {:>7}",
            "method", "q", "observed", "predicted", "match"
        );
        for r in reports {
            out.push_str(&format!(
                "\n{:<12} {:>6} {:>14} {:>14} {:>7}",
                r.method.name(),
                r.q,
                r.observed,
                r.predicted,
                if r.matched { "yes" } else { "NO" }
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let r = CountReport::new(CountMethod::TwistedOrbit, 3, 9, BigInt::from(9));
        let bad = CountReport::new(CountMethod::InvariantPresentation, 5, 24, BigInt::from(25));
        let t = CountReport::table(&[r, bad]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
        assert!(lines[1].ends_with("yes") && lines[2].ends_with("NO"));
    }
}
