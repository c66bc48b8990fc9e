//! Embedding of every supported field into a cyclotomic field `Q(ζ_L)`.
//!
//! All supported fields are abelian over Q, so each sits inside some
//! `Q(ζ_L)` and is the fixed field of a subgroup `H ⊂ (Z/L)^×`. Root-of-unity
//! membership, square-root tests and local degrees all reduce to arithmetic in
//! `(Z/L)^×`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::field::{Field, FieldElem, FieldKind};
use super::linalg::solve_rational;
use super::rat::{gcd, lcm, prime_factors, rat, squarefree, squarefree_class, Rat};
use super::ExactError;

/// Conductor of `Q(√d)` for squarefree `d`; 1 for `d = 1`.
pub fn quadratic_conductor(d: i64) -> u64 {
    let d = squarefree(d);
    if d == 1 {
        1
    } else if d.rem_euclid(4) == 1 {
        d.unsigned_abs()
    } else {
        4 * d.unsigned_abs()
    }
}

#[derive(Debug)]
pub struct CyclotomicEmbedding {
    level: u64,
    ambient: Field,
    field: Field,
    /// Images of the field's Q-basis.
    images: Vec<FieldElem>,
    /// `H`: exponents `a` with `σ_a` fixing the image.
    fixing: Vec<u64>,
}

fn cache() -> &'static Mutex<HashMap<FieldKind, Arc<CyclotomicEmbedding>>> {
    static C: OnceLock<Mutex<HashMap<FieldKind, Arc<CyclotomicEmbedding>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ζ_L^j` in `Q(ζ_L)`.
pub fn zeta_power(ambient: &Field, level: u64, j: u64) -> FieldElem {
    ambient.generator().pow((j % level) as i64)
}

/// Galois action `ζ ↦ ζ^a` on an element of `Q(ζ_L)`.
pub fn galois_act(x: &FieldElem, level: u64, a: u64) -> FieldElem {
    let amb = x.field().clone();
    let mut out = amb.zero();
    for (i, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out = out + zeta_power(&amb, level, a * i as u64 % level).scale(c);
    }
    out
}

/// Moves an element of `Q(ζ_L1)` into `Q(ζ_L2)` for `L1 | L2`.
pub fn lift(x: &FieldElem, l1: u64, target: &Field, l2: u64) -> FieldElem {
    assert_eq!(l2 % l1, 0);
    let step = l2 / l1;
    let mut out = target.zero();
    for (i, c) in x.coords().iter().enumerate() {
        if !c.is_zero() {
            out = out + zeta_power(target, l2, step * i as u64).scale(c);
        }
    }
    out
}

/// A square root of the integer `d` inside `Q(ζ_L)`; needs the conductor of `d` to divide `L`.
pub fn sqrt_in_cyclotomic(d: i64, ambient: &Field, level: u64) -> FieldElem {
    assert!(d != 0);
    let sf = squarefree(d);
    let cond = quadratic_conductor(sf);
    assert_eq!(level % cond, 0, "sqrt({d}) is not in Q(zeta_{level})");
    // d = sf * s^2
    let s = ((d / sf) as f64).sqrt().round() as i64;
    let mut root = ambient.one();
    let mut rest = sf;
    for p in prime_factors(sf.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        // Gauss sum Σ (a/p) ζ_p^a squares to p*
        let mut g = ambient.zero();
        for a in 1..p {
            let leg = legendre_small(a, p);
            let term = zeta_power(ambient, level, level / p * a);
            g = if leg == 1 { g + term } else { g - term };
        }
        root = root * g;
        rest /= pstar;
    }
    // rest ∈ {±1, ±2}
    let tail = match rest {
        1 => ambient.one(),
        -1 => zeta_power(ambient, level, level / 4),
        2 => zeta_power(ambient, level, level / 8) + zeta_power(ambient, level, level / 8 * 7),
        -2 => zeta_power(ambient, level, level / 8) + zeta_power(ambient, level, level / 8 * 3),
        _ => unreachable!("squarefree cofactor {rest}"),
    };
    let out = (root * tail).scale(&rat(s));
    debug_assert_eq!(&out * &out, ambient.from_int(d));
    out
}

fn legendre_small(a: u64, p: u64) -> i32 {
    super::rat::legendre(a as i64, p)
}

fn units(level: u64) -> Vec<u64> {
    (1..level.max(2)).filter(|&a| gcd(a, level) == 1).collect()
}

impl CyclotomicEmbedding {
    pub fn of(field: &Field) -> Result<Arc<CyclotomicEmbedding>, ExactError> {
        if let Some(e) = cache().lock().unwrap().get(field.kind()) {
            return Ok(e.clone());
        }
        let e = Arc::new(Self::build(field)?);
        cache()
            .lock()
            .unwrap()
            .insert(field.kind().clone(), e.clone());
        Ok(e)
    }

    fn build(field: &Field) -> Result<CyclotomicEmbedding, ExactError> {
        let (level, images) = match field.kind() {
            FieldKind::Rational => {
                let amb = Field::cyclotomic(2)?;
                (2, vec![amb.one()])
            }
            FieldKind::Cyclotomic(m) => {
                let level = lcm(*m, 2);
                let amb = Field::cyclotomic(level)?;
                let z = zeta_power(&amb, level, level / m);
                let imgs = (0..field.degree()).map(|i| z.pow(i as i64)).collect();
                (level, imgs)
            }
            FieldKind::Quadratic(d) => {
                let level = lcm(quadratic_conductor(*d), 2);
                let amb = Field::cyclotomic(level)?;
                (level, vec![amb.one(), sqrt_in_cyclotomic(*d, &amb, level)])
            }
            FieldKind::RelativeQuadratic { base, c1, c0 } => {
                let be = Self::of(base)?;
                let disc = c1 * c1 - rat(4) * c0;
                let d = squarefree_class(&disc).ok_or_else(|| {
                    ExactError::UnsupportedField("relative discriminant out of range".into())
                })?;
                let level = lcm(be.level, quadratic_conductor(d));
                let amb = Field::cyclotomic(level)?;
                // disc = d * r^2 with r rational
                let r2 = &disc / rat(d);
                let r = rational_sqrt(&r2).expect("square class computed above");
                let sq = sqrt_in_cyclotomic(d, &amb, level).scale(&r);
                let half = Rat::new(1.into(), 2.into());
                let w = (sq - amb.from_rat(c1.clone())).scale(&half);
                let base_imgs: Vec<FieldElem> = be
                    .images
                    .iter()
                    .map(|x| lift(x, be.level, &amb, level))
                    .collect();
                let mut imgs = base_imgs.clone();
                imgs.extend(base_imgs.iter().map(|x| x * &w));
                (level, imgs)
            }
        };
        let ambient = images[0].field().clone();
        let fixing = units(level)
            .into_iter()
            .filter(|&a| images.iter().all(|x| &galois_act(x, level, a) == x))
            .collect();
        Ok(CyclotomicEmbedding {
            level,
            ambient,
            field: field.clone(),
            images,
            fixing,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ambient(&self) -> &Field {
        &self.ambient
    }

    /// The subgroup `H ⊂ (Z/L)^×` fixing the field.
    pub fn fixing_group(&self) -> &[u64] {
        &self.fixing
    }

    pub fn embed(&self, x: &FieldElem) -> FieldElem {
        assert_eq!(x.field(), &self.field);
        let mut out = self.ambient.zero();
        for (c, img) in x.coords().iter().zip(&self.images) {
            if !c.is_zero() {
                out = out + img.scale(c);
            }
        }
        out
    }

    /// Preimage of an ambient element, if it lies in the field.
    pub fn pull_back(&self, y: &FieldElem) -> Option<FieldElem> {
        let cols: Vec<Vec<Rat>> = self.images.iter().map(|x| x.coords().to_vec()).collect();
        let sol = solve_rational(&cols, y.coords())?;
        Some(self.field.from_coords(sol))
    }

    /// Preimage of an element of `Q(ζ_L')`, `L'` a multiple of the level.
    pub fn pull_back_lifted(&self, y: &FieldElem, l2: u64) -> Option<FieldElem> {
        let amb = y.field().clone();
        let cols: Vec<Vec<Rat>> = self
            .images
            .iter()
            .map(|x| lift(x, self.level, &amb, l2).coords().to_vec())
            .collect();
        let sol = solve_rational(&cols, y.coords())?;
        Some(self.field.from_coords(sol))
    }

    /// Fixing group lifted to `(Z/L')^×` for a multiple `L'` of the level.
    pub fn lifted_fixing(&self, l2: u64) -> Vec<u64> {
        units(l2)
            .into_iter()
            .filter(|a| self.fixing.contains(&(a % self.level)))
            .collect()
    }

    pub fn contains_sqrt(&self, d: i64) -> Result<bool, ExactError> {
        let sf = squarefree(d);
        if sf == 1 {
            return Ok(true);
        }
        let l2 = lcm(self.level, quadratic_conductor(sf));
        let amb = Field::cyclotomic(l2)?;
        let r = sqrt_in_cyclotomic(sf, &amb, l2);
        Ok(self
            .lifted_fixing(l2)
            .into_iter()
            .all(|a| galois_act(&r, l2, a) == r))
    }

    /// Number of roots of unity in the field.
    pub fn unit_root_order(&self) -> u64 {
        let l = self.level;
        let s = self
            .fixing
            .iter()
            .map(|&a| l / gcd((a + l - 1) % l, l))
            .fold(1, lcm);
        l / s
    }

    pub fn unit_root_generator(&self) -> Option<FieldElem> {
        let w = self.unit_root_order();
        let z = zeta_power(&self.ambient, self.level, self.level / w);
        self.pull_back(&z)
    }

    /// Degree `[k_w : Q_v]` of the completions above `v` (prime `p`, or `None` for ∞).
    pub fn local_degree(&self, place: Option<u64>) -> u64 {
        let l = self.level;
        let decomposition: Vec<u64> = match place {
            None => {
                if l <= 2 {
                    vec![1]
                } else {
                    vec![1, l - 1]
                }
            }
            Some(p) => {
                let mut m = l;
                while m % p == 0 {
                    m /= p;
                }
                let powers: Vec<u64> = if m == 1 {
                    vec![0]
                } else {
                    let mut v = vec![];
                    let mut x = 1 % m;
                    loop {
                        v.push(x);
                        x = x * (p % m) % m;
                        if x == 1 % m {
                            break;
                        }
                    }
                    v
                };
                units(l)
                    .into_iter()
                    .filter(|a| powers.contains(&(a % m)))
                    .collect()
            }
        };
        let inter = decomposition
            .iter()
            .filter(|a| self.fixing.contains(a))
            .count() as u64;
        decomposition.len() as u64 / inter
    }

    /// Residue degree of `p` in the field, for `p` not dividing the level.
    pub fn residue_degree(&self, p: u64) -> Option<u64> {
        if self.level % p == 0 {
            return None;
        }
        let mut x = p % self.level;
        for f in 1..=self.level {
            if self.fixing.contains(&x) {
                return Some(f);
            }
            x = x * p % self.level;
        }
        None
    }

    /// Field degree over Q, computed from the Galois side.
    pub fn galois_degree(&self) -> u64 {
        units(self.level).len() as u64 / self.fixing.len() as u64
    }
}

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    use super::rat::big_isqrt_exact;
    if r < &Rat::zero() {
        return None;
    }
    let n = big_isqrt_exact(r.numer())?;
    let d = big_isqrt_exact(r.denom())?;
    Some(Rat::new(n, d))
}

/// Is `r` a nonzero square in `k`?
pub fn is_square_in(k: &Field, r: &Rat) -> Result<bool, ExactError> {
    match squarefree_class(r) {
        None => Ok(false),
        Some(d) => k.contains_sqrt(d),
    }
}

/// Is `x` equal to one?
pub fn is_unit_one(x: &FieldElem) -> bool {
    x.coords()[0].is_one() && x.coords()[1..].iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sums_square_correctly() {
        for d in [-1, 2, -2, 3, -3, 5, -5, 6, -7, 10, -15] {
            let l = lcm(quadratic_conductor(d), 2);
            let amb = Field::cyclotomic(l).unwrap();
            let r = sqrt_in_cyclotomic(d, &amb, l);
            assert_eq!(&r * &r, amb.from_int(d), "d = {d}");
        }
    }

    #[test]
    fn quadratic_subfields_of_cyclotomics() {
        let k3 = Field::cyclotomic(3).unwrap();
        assert!(k3.contains_sqrt(-3).unwrap());
        assert!(!k3.contains_sqrt(-1).unwrap());
        let k8 = Field::cyclotomic(8).unwrap();
        for d in [-1, 2, -2] {
            assert!(k8.contains_sqrt(d).unwrap());
        }
        assert!(!k8.contains_sqrt(3).unwrap());
        let k12 = Field::cyclotomic(12).unwrap();
        assert!(k12.contains_sqrt(3).unwrap());
    }

    #[test]
    fn galois_degrees_match() {
        for k in [
            Field::rational(),
            Field::cyclotomic(5).unwrap(),
            Field::cyclotomic(12).unwrap(),
            Field::quadratic(-7).unwrap(),
        ] {
            let e = CyclotomicEmbedding::of(&k).unwrap();
            assert_eq!(e.galois_degree(), k.degree() as u64);
        }
    }

    #[test]
    fn local_degrees_of_gaussian_field() {
        let e = CyclotomicEmbedding::of(&Field::cyclotomic(4).unwrap()).unwrap();
        assert_eq!(e.local_degree(None), 2);
        assert_eq!(e.local_degree(Some(2)), 2);
        assert_eq!(e.local_degree(Some(5)), 1);
        assert_eq!(e.local_degree(Some(3)), 2);
        assert_eq!(e.residue_degree(3), Some(2));
        assert_eq!(e.residue_degree(13), Some(1));
    }

    #[test]
    fn pull_back_round_trip() {
        let k = Field::quadratic(-3).unwrap();
        let e = CyclotomicEmbedding::of(&k).unwrap();
        let x = k.generator() + k.from_int(2);
        assert_eq!(e.pull_back(&e.embed(&x)).unwrap(), x);
        let zeta = zeta_power(e.ambient(), e.level(), 1);
        assert!(e.pull_back(&zeta).is_some());
    }
}
