//! Interchangeable point counters for quotients over `F_q`.

use super::invariants::{count_affine_points, invariant_presentation};
use super::report::CountMethod;
use super::twisted::{
    semilinear_orbit_count, twisted_orbit_count, twisted_orbit_count_exhaustive,
    SemilinearElement, Stratum, DEFAULT_ENUMERATION_BUDGET,
};
use super::OracleError;
use crate::exact::Field;
use crate::repgroup::GroupAction;

/// What is being counted: a linear action on `k^n`, or a group acting
/// semilinearly on `K^n` viewed over `k`.
#[derive(Clone, Copy, Debug)]
pub enum CountTarget<'a> {
    Linear(&'a GroupAction),
    Semilinear {
        ext: &'a Field,
        elements: &'a [SemilinearElement],
    },
}

pub trait PointCounter: Send + Sync {
    fn method(&self) -> CountMethod;

    fn supports(&self, target: &CountTarget<'_>) -> bool;

    /// `|(X/G)(F_q)|` for `X` the chosen stratum of `V`.
    fn count(&self, target: &CountTarget<'_>, stratum: Stratum, q: u64) -> Result<u128, OracleError>;
}

/// Kernel dimensions of `Frob_q - g` over `F_p`.
pub struct TwistedCounter;

impl PointCounter for TwistedCounter {
    fn method(&self) -> CountMethod {
        CountMethod::TwistedOrbit
    }

    fn supports(&self, _target: &CountTarget<'_>) -> bool {
        true
    }

    fn count(&self, target: &CountTarget<'_>, stratum: Stratum, q: u64) -> Result<u128, OracleError> {
        match target {
            CountTarget::Linear(a) => twisted_orbit_count(a, stratum, q),
            CountTarget::Semilinear { ext, elements } => {
                semilinear_orbit_count(ext, elements, stratum, q)
            }
        }
    }
}

/// Points of the binomial presentation of the invariant ring.
pub struct InvariantCounter {
    pub budget: u128,
}

impl PointCounter for InvariantCounter {
    fn method(&self) -> CountMethod {
        CountMethod::InvariantPresentation
    }

    fn supports(&self, target: &CountTarget<'_>) -> bool {
        match target {
            CountTarget::Linear(a) => invariant_presentation(a).is_ok(),
            CountTarget::Semilinear { .. } => false,
        }
    }

    fn count(&self, target: &CountTarget<'_>, stratum: Stratum, q: u64) -> Result<u128, OracleError> {
        let CountTarget::Linear(a) = target else {
            return Err(OracleError::UnsupportedAction(
                "invariant presentations need a linear action".into(),
            ));
        };
        let pres = invariant_presentation(a)?;
        let n = count_affine_points(&pres.relations, pres.generators.len(), q, self.budget)?;
        // the origin maps to the single point where every generator vanishes
        Ok(match stratum {
            Stratum::Full => n,
            Stratum::Punctured => n - 1,
        })
    }
}

/// Tests `Frob_q(x) = g·x` at every point.
pub struct ExhaustiveCounter {
    pub budget: u128,
}

impl PointCounter for ExhaustiveCounter {
    fn method(&self) -> CountMethod {
        CountMethod::DirectEnumeration
    }

    fn supports(&self, target: &CountTarget<'_>) -> bool {
        matches!(target, CountTarget::Linear(_))
    }

    fn count(&self, target: &CountTarget<'_>, stratum: Stratum, q: u64) -> Result<u128, OracleError> {
        match target {
            CountTarget::Linear(a) => twisted_orbit_count_exhaustive(a, stratum, q, self.budget),
            CountTarget::Semilinear { .. } => Err(OracleError::UnsupportedAction(
                "exhaustive counting of semilinear actions is not implemented".into(),
            )),
        }
    }
}

/// Counters by name, in a fixed order.
pub struct CounterRegistry {
    counters: Vec<Box<dyn PointCounter>>,
}

impl CounterRegistry {
    pub fn standard() -> Self {
        Self::with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn with_budget(budget: u128) -> Self {
        CounterRegistry {
            counters: vec![
                Box::new(TwistedCounter),
                Box::new(InvariantCounter { budget }),
                Box::new(ExhaustiveCounter { budget }),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn PointCounter> {
        self.counters
            .iter()
            .find(|c| c.method().name() == name)
            .map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.counters.iter().map(|c| c.method().name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn PointCounter> {
        self.counters.iter().map(|c| c.as_ref())
    }
}

impl Default for CounterRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    #[test]
    fn counters_agree_on_the_sign_action() {
        let q = Field::rational();
        let a = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]), 2).unwrap();
        let reg = CounterRegistry::standard();
        assert_eq!(reg.names(), vec!["twisted", "invariant", "exhaustive"]);
        let t = CountTarget::Linear(&a);
        for c in reg.iter() {
            assert!(c.supports(&t));
            assert_eq!(c.count(&t, Stratum::Full, 3).unwrap(), 9);
            assert_eq!(c.count(&t, Stratum::Punctured, 3).unwrap(), 8);
        }
    }
}
