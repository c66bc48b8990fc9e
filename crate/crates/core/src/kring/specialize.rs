use num_bigint::BigInt;

use super::atom::Atom;
use super::expr::KExpr;
use super::KringError;
use crate::exact::rat::{is_prime, legendre, prime_power};
use crate::exact::{CyclotomicEmbedding, Field};

/// Reduction of the base field at an odd prime `p`, with residue field `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationContext {
    pub p: u64,
    /// `q = p^f`; a multiple of the residue degree of `p` in the base field.
    pub f: u32,
    pub q: u64,
}

impl SpecializationContext {
    pub fn new(base: &Field, p: u64) -> Result<Self, KringError> {
        if p == 2 || !is_prime(p) {
            return Err(KringError::BadReduction {
                p,
                reason: "p must be an odd prime".into(),
            });
        }
        let emb = CyclotomicEmbedding::of(base).map_err(|e| KringError::BadReduction {
            p,
            reason: e.to_string(),
        })?;
        let f = emb.residue_degree(p).ok_or_else(|| KringError::BadReduction {
            p,
            reason: format!("p ramifies in {}", base.name()),
        })?;
        Ok(SpecializationContext {
            p,
            f: f as u32,
            q: p.pow(f as u32),
        })
    }

    /// Counting over `F_q` for a power `q` of the residue field size of some odd `p`.
    pub fn for_q(base: &Field, q: u64) -> Result<Self, KringError> {
        let (p, e) = prime_power(q).ok_or_else(|| KringError::BadReduction {
            p: q,
            reason: "q is not a prime power".into(),
        })?;
        let ctx = Self::new(base, p)?;
        if e % ctx.f != 0 {
            return Err(KringError::BadReduction {
                p,
                reason: format!("F_{q} does not contain the residue field F_{}", ctx.q),
            });
        }
        Ok(SpecializationContext { p, f: e, q })
    }

    /// Good-reduction check for one atom.
    pub fn check_atom(&self, a: &Atom) -> Result<(), KringError> {
        let p = self.p as i64;
        let bad = match a {
            Atom::SpecEtale(d) => d % p == 0,
            Atom::Conic(a, b) => a % p == 0 || b % p == 0,
        };
        if bad {
            return Err(KringError::BadReduction {
                p: self.p,
                reason: format!("{} has bad reduction", a.render()),
            });
        }
        Ok(())
    }

    /// `+1` when `d` is a square in `F_q`, else `-1`.
    pub fn quadratic_character(&self, d: i64) -> i64 {
        if self.f % 2 == 0 || legendre(d, self.p) == 1 {
            1
        } else {
            -1
        }
    }
}

/// Number of `F_q`-points: `𝕃 ↦ q`, `[Spec k(√d)] ↦ 1 + χ_q(d)`, conics `↦ q + 1`.
pub fn specialize_count(x: &KExpr, ctx: &SpecializationContext) -> Result<BigInt, KringError> {
    let q = BigInt::from(ctx.q);
    x.evaluate(&q, |a| {
        ctx.check_atom(a)?;
        Ok(match a {
            Atom::SpecEtale(d) => BigInt::from(1 + ctx.quadratic_character(*d)),
            Atom::Conic(..) => BigInt::from(ctx.q + 1),
        })
    })
}
