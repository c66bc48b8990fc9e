//! Interchangeable procedures for `[V/G]`, tried in a fixed order or forced by name.

use super::descent::{descent_conic_quotient, DescentDatum};
use super::dim2::prop131_class;
use super::prime_power::cyclic_prime_power_class;
use super::semilinear::{semilinear_quotient_class, SemilinearAction};
use super::split::diagonal_split_class;
use super::{Derived, QuotientError};
use crate::exact::rat::prime_power;
use crate::repgroup::{irreducible_decomposition, GroupAction};

/// The inputs a route may use: a linear action, a semilinear action, or a descent datum.
#[derive(Clone, Debug, Default)]
pub struct QuotientProblem {
    pub action: Option<GroupAction>,
    pub semilinear: Option<SemilinearAction>,
    pub descent: Option<DescentDatum>,
}

impl QuotientProblem {
    pub fn linear(a: GroupAction) -> Self {
        QuotientProblem {
            action: Some(a),
            ..Default::default()
        }
    }

    pub fn descent(dd: DescentDatum) -> Self {
        QuotientProblem {
            descent: Some(dd),
            ..Default::default()
        }
    }

    fn need_action(&self) -> Result<&GroupAction, QuotientError> {
        self.action
            .as_ref()
            .ok_or_else(|| QuotientError::NoRoute("no linear action given".into()))
    }
}

pub trait QuotientRoute: Send + Sync {
    fn name(&self) -> &'static str;

    /// `Ok` when the route's hypotheses hold, else the violated hypothesis.
    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError>;

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError>;
}

struct SplitRoute;

impl QuotientRoute for SplitRoute {
    fn name(&self) -> &'static str {
        "split"
    }

    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError> {
        let a = p.need_action()?;
        let n = a.group().exponent().max(1);
        if a.field().contains_nth_roots(n) {
            Ok(())
        } else {
            Err(QuotientError::RootsOfUnityMissing {
                n,
                field: a.field().name(),
            })
        }
    }

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError> {
        diagonal_split_class(p.need_action()?)
    }
}

struct PrimePowerRoute;

impl QuotientRoute for PrimePowerRoute {
    fn name(&self) -> &'static str {
        "prime-power"
    }

    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError> {
        let a = p.need_action()?;
        let (_, order) = a.image_generator()?;
        if order > 1 && prime_power(order).is_none() {
            return Err(QuotientError::NotPrimePower { order });
        }
        irreducible_decomposition(a)?;
        Ok(())
    }

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError> {
        cyclic_prime_power_class(p.need_action()?)
    }
}

struct DescentRoute;

impl QuotientRoute for DescentRoute {
    fn name(&self) -> &'static str {
        "descent"
    }

    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError> {
        match &p.descent {
            Some(dd) if dd.group_order().is_some() => Ok(()),
            Some(dd) => Err(QuotientError::InfiniteGroup {
                c: crate::exact::rat::render_rat(dd.c()),
            }),
            None => Err(QuotientError::NoRoute("no descent datum given".into())),
        }
    }

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError> {
        let dd = p
            .descent
            .as_ref()
            .ok_or_else(|| QuotientError::NoRoute("no descent datum given".into()))?;
        descent_conic_quotient(dd)
    }
}

struct SmallDimensionRoute;

impl QuotientRoute for SmallDimensionRoute {
    fn name(&self) -> &'static str {
        "dim-le-2"
    }

    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError> {
        let a = p.need_action()?;
        if a.dim() <= 2 {
            Ok(())
        } else {
            Err(QuotientError::DimensionTooLarge { dim: a.dim() })
        }
    }

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError> {
        prop131_class(p.need_action()?)
    }
}

struct SemilinearRoute;

impl SemilinearRoute {
    fn action(p: &QuotientProblem) -> Result<SemilinearAction, QuotientError> {
        if let Some(s) = &p.semilinear {
            return Ok(s.clone());
        }
        if let Some(dd) = &p.descent {
            return dd.semilinear_action();
        }
        Err(QuotientError::NoRoute("no semilinear action given".into()))
    }
}

impl QuotientRoute for SemilinearRoute {
    fn name(&self) -> &'static str {
        "semilinear"
    }

    fn applies(&self, p: &QuotientProblem) -> Result<(), QuotientError> {
        let s = Self::action(p)?;
        let n = s.group().exponent().max(1);
        if s.base().contains_nth_roots(n) {
            Ok(())
        } else {
            Err(QuotientError::RootsOfUnityMissing {
                n,
                field: s.base().name(),
            })
        }
    }

    fn run(&self, p: &QuotientProblem) -> Result<Derived, QuotientError> {
        semilinear_quotient_class(&Self::action(p)?)
    }
}

/// Routes in selection order.
pub struct RouteRegistry {
    routes: Vec<Box<dyn QuotientRoute>>,
}

impl RouteRegistry {
    /// `split`, `prime-power`, `descent`, `dim-le-2`, `semilinear`.
    pub fn standard() -> Self {
        RouteRegistry {
            routes: vec![
                Box::new(SplitRoute),
                Box::new(PrimePowerRoute),
                Box::new(DescentRoute),
                Box::new(SmallDimensionRoute),
                Box::new(SemilinearRoute),
            ],
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn QuotientRoute> {
        self.routes.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }

    /// The first route whose hypotheses hold.
    pub fn select(&self, p: &QuotientProblem) -> Result<&dyn QuotientRoute, QuotientError> {
        let mut reasons = Vec::new();
        for r in &self.routes {
            match r.applies(p) {
                Ok(()) => return Ok(r.as_ref()),
                Err(e) => reasons.push(format!("{}: {e}", r.name())),
            }
        }
        Err(QuotientError::NoRoute(reasons.join("; ")))
    }

    /// Runs the named route, or the first applicable one; returns the route name too.
    pub fn run(
        &self,
        p: &QuotientProblem,
        forced: Option<&str>,
    ) -> Result<(&'static str, Derived), QuotientError> {
        let route = match forced {
            Some(name) => self.get(name).ok_or_else(|| {
                QuotientError::Invalid(format!(
                    "unknown route {name}; expected one of {}",
                    self.names().join(", ")
                ))
            })?,
            None => self.select(p)?,
        };
        Ok((route.name(), route.run(p)?))
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Field, Matrix};

    #[test]
    fn selection_order() {
        let reg = RouteRegistry::standard();
        let q = Field::rational();
        let sign = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[-1, 0], &[0, -1]]), 2).unwrap();
        assert_eq!(reg.select(&QuotientProblem::linear(sign)).unwrap().name(), "split");
        let rot = Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]);
        let two = GroupAction::cyclic(&q, Matrix::direct_sum(&[rot.clone(), rot.clone()]), 4).unwrap();
        let p = QuotientProblem::linear(two);
        assert_eq!(reg.select(&p).unwrap().name(), "prime-power");
        let ex = QuotientProblem::descent(DescentDatum::gaussian_quarter_turn());
        let (name, (x, _)) = reg.run(&ex, None).unwrap();
        assert_eq!((name, x.render().as_str()), ("descent", "1*L*C(-1,-1) - 1*C(-1,-1) + 1"));
    }

    #[test]
    fn forced_routes_report_hypotheses() {
        let reg = RouteRegistry::standard();
        let q = Field::rational();
        let rot = GroupAction::cyclic(&q, Matrix::from_ints(&q, &[&[0, -1], &[1, 0]]), 4).unwrap();
        let err = reg.run(&QuotientProblem::linear(rot), Some("split")).unwrap_err();
        assert!(err.is_hypothesis_violation());
        assert_eq!(err.anchor(), "roots-of-unity-hypothesis");
        let ex = QuotientProblem::descent(DescentDatum::gaussian_quarter_turn());
        assert!(matches!(
            reg.run(&ex, Some("semilinear")),
            Err(QuotientError::RootsOfUnityMissing { n: 4, .. })
        ));
    }
}
