//! Finite-support distributions over labelled points.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::grid::{exact_string, Exact, GridValue};
use super::loss::LabeledSample;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub point: usize,
    pub label: GridValue,
    pub mass: Exact,
}

/// Masses are nonnegative and sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistribution {
    support: Vec<Atom>,
}

impl FiniteDistribution {
    pub fn new(support: Vec<Atom>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if let Some(a) = support.iter().find(|a| a.mass.is_negative()) {
            return Err(Error::InvalidDistribution(format!("negative mass {}", exact_string(&a.mass))));
        }
        let total: Exact = support.iter().map(|a| a.mass.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {}", exact_string(&total))));
        }
        Ok(Self { support })
    }

    /// Uniform mass over the given labelled points.
    pub fn uniform(points: &[(usize, GridValue)]) -> Result<Self> {
        let m = Exact::new(BigInt::one(), BigInt::from(points.len().max(1)));
        Self::new(points.iter().map(|&(point, label)| Atom { point, label, mass: m.clone() }).collect())
    }

    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    /// Total mass on a domain point.
    pub fn marginal(&self, point: usize) -> Exact {
        self.support.iter().filter(|a| a.point == point).map(|a| a.mass.clone()).sum()
    }

    /// Draws `n` i.i.d. examples; exact integer sampling over the common denominator.
    pub fn sample(&self, n: usize, seed: u64) -> Result<LabeledSample> {
        let den = self.support.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.mass.denom()));
        let den_u64 = den
            .to_u64()
            .ok_or_else(|| Error::InvalidDistribution("mass denominators too large to sample exactly".into()))?;
        let weights: Vec<u64> = self
            .support
            .iter()
            .map(|a| (a.mass.numer() * (&den / a.mass.denom())).to_u64().expect("weight below denominator"))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::with_capacity(n);
        for _ in 0..n {
            let mut draw = rng.random_range(0..den_u64);
            let mut idx = 0;
            while draw >= weights[idx] {
                draw -= weights[idx];
                idx += 1;
            }
            pairs.push((self.support[idx].point, self.support[idx].label));
        }
        Ok(LabeledSample::new(pairs))
    }

    /// `{"Q": q, "support": [[x, y_num, mass_num, mass_den], ...]}`; labels must lie on the `Q` grid.
    pub fn to_json(&self) -> Result<Value> {
        let q = self.support.iter().fold(1i64, |acc, a| acc.lcm(a.label.ratio().denom()));
        let mut rows = Vec::new();
        for a in &self.support {
            let y = a.label.numer_on(q).expect("common denominator");
            let num = a.mass.numer().to_i64().ok_or_else(|| Error::InvalidDistribution("mass too large".into()))?;
            let den = a.mass.denom().to_i64().ok_or_else(|| Error::InvalidDistribution("mass too large".into()))?;
            rows.push(serde_json::json!([a.point, y, num, den]));
        }
        Ok(serde_json::json!({ "Q": q, "support": rows }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let q = v.get("Q").and_then(Value::as_i64).unwrap_or(1);
        let rows = v
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("distribution needs a \"support\" array".into()))?;
        let mut support = Vec::with_capacity(rows.len());
        for r in rows {
            let field = |i: usize| {
                r.get(i).and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("bad support entry {r}")))
            };
            let (x, y, mn, md) = (field(0)?, field(1)?, field(2)?, field(3)?);
            if x < 0 || md <= 0 {
                return Err(Error::Parse(format!("bad support entry {r}")));
            }
            support.push(Atom {
                point: x as usize,
                label: GridValue::new(y, q)?,
                mass: Exact::new(BigInt::from(mn), BigInt::from(md)),
            });
        }
        Self::new(support)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn is_point_mass(&self) -> bool {
        self.support.iter().filter(|a| !a.mass.is_zero()).count() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::loss::{population_error, LabelList};

    fn v(p: i64, q: i64) -> GridValue {
        GridValue::new(p, q).unwrap()
    }

    fn mass(n: i64, d: i64) -> Exact {
        Exact::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rejects_bad_masses() {
        let a = |m| Atom { point: 0, label: v(0, 1), mass: m };
        assert!(FiniteDistribution::new(vec![a(mass(1, 2))]).is_err());
        assert!(FiniteDistribution::new(vec![a(mass(3, 2)), a(mass(-1, 2))]).is_err());
        assert!(FiniteDistribution::new(vec![a(mass(1, 3)), a(mass(2, 3))]).is_ok());
    }

    #[test]
    fn sampling_is_reproducible_and_respects_support() {
        let d = FiniteDistribution::new(vec![
            Atom { point: 0, label: v(1, 10), mass: mass(1, 4) },
            Atom { point: 3, label: v(3, 10), mass: mass(3, 4) },
        ])
        .unwrap();
        let s1 = d.sample(200, 7).unwrap();
        assert_eq!(s1, d.sample(200, 7).unwrap());
        assert!(s1.pairs.iter().all(|&(x, y)| (x == 0 && y == v(1, 10)) || (x == 3 && y == v(3, 10))));
        let zeros = s1.pairs.iter().filter(|p| p.0 == 0).count();
        assert!((20..=80).contains(&zeros));
    }

    #[test]
    fn point_mass_error_is_pointwise_loss() {
        let d = FiniteDistribution::uniform(&[(2, v(1, 2))]).unwrap();
        assert!(d.is_point_mass());
        let p = |_x: usize| Some(LabelList::single(v(1, 5)));
        assert_eq!(population_error(&p, &d).unwrap(), mass(3, 10));
    }

    #[test]
    fn json_round_trip() {
        let d = FiniteDistribution::new(vec![
            Atom { point: 1, label: v(1, 5), mass: mass(1, 3) },
            Atom { point: 2, label: v(1, 2), mass: mass(2, 3) },
        ])
        .unwrap();
        assert_eq!(FiniteDistribution::from_json(&d.to_json().unwrap()).unwrap(), d);
    }
}
