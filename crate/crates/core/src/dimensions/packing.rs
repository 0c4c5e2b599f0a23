//! `k`-ary packing numbers by branch and bound, and the packing sandwich report.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use super::shattering::{fat_dim_with, strong_fat_dim_with};
use super::SearchCaps;
use crate::error::{Error, Result};
use crate::model::grid::{binomial, common_denominator, Ratio64};
use crate::model::{HypothesisClass, Scale};

/// Rows of the input class forming a `(k+1)`-wise separated family.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PackingWitness {
    pub rows: Vec<usize>,
    /// Every `(k+1)`-subset of `rows` with its first separating point.
    pub separators: Vec<(Vec<usize>, usize)>,
}

impl PackingWitness {
    pub fn to_json(&self) -> Value {
        let seps: Vec<Value> = self.separators.iter().map(|(t, x)| serde_json::json!({"rows": t, "point": x})).collect();
        serde_json::json!({ "rows": self.rows, "separators": seps })
    }
}

struct Separation {
    values: Vec<Vec<i64>>,
    two_g: i64,
}

impl Separation {
    fn point(&self, tuple: &[usize]) -> Option<usize> {
        let n = self.values.first().map_or(0, Vec::len);
        let mut buf = Vec::with_capacity(tuple.len());
        (0..n).find(|&x| {
            buf.clear();
            buf.extend(tuple.iter().map(|&r| self.values[r][x]));
            buf.sort_unstable();
            buf.windows(2).all(|w| w[1] - w[0] >= self.two_g)
        })
    }
}

fn for_each_subset(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(items: &[usize], start: usize, size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            if !rec(items, i + 1, size, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(items, 0, size, &mut Vec::with_capacity(size), f)
}

struct Bnb<'a> {
    sep: &'a Separation,
    k: usize,
    best: Vec<usize>,
    budget: u64,
}

impl Bnb<'_> {
    /// Candidates that remain compatible after adding `r` to `chosen`.
    fn filter(&self, chosen: &[usize], r: usize, cands: &[usize]) -> Vec<usize> {
        if chosen.len() + 1 < self.k {
            return cands.to_vec();
        }
        cands
            .iter()
            .copied()
            .filter(|&p| {
                for_each_subset(chosen, self.k - 1, &mut |sub| {
                    let mut t = sub.to_vec();
                    t.push(r);
                    t.push(p);
                    self.sep.point(&t).is_some()
                })
            })
            .collect()
    }

    fn run(&mut self, chosen: &mut Vec<usize>, cands: Vec<usize>) -> Result<()> {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        for (i, &r) in cands.iter().enumerate() {
            if chosen.len() + cands.len() - i <= self.best.len() {
                return Ok(());
            }
            if self.budget == 0 {
                return Err(Error::BudgetExhausted("packing search node budget".into()));
            }
            self.budget -= 1;
            let next = self.filter(chosen, r, &cands[i + 1..]);
            chosen.push(r);
            self.run(chosen, next)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Largest `(k+1)`-wise `gamma`-separated subset of distinct rows.
pub fn k_ary_packing(h: &HypothesisClass, gamma: Scale, k: usize) -> Result<(usize, PackingWitness)> {
    k_ary_packing_with(h, gamma, k, &SearchCaps::default())
}

pub fn k_ary_packing_with(h: &HypothesisClass, gamma: Scale, k: usize, caps: &SearchCaps) -> Result<(usize, PackingWitness)> {
    h.require_total()?;
    if k == 0 {
        return Err(Error::Precondition("list size k must be at least 1".into()));
    }
    let dedup = h.restrict(&(0..h.domain_size()).collect::<Vec<_>>())?;
    if dedup.class.len() > caps.max_packing_rows {
        return Err(Error::ExceedsDeskScale(format!("{} distinct rows exceed the packing cap {}", dedup.class.len(), caps.max_packing_rows)));
    }
    let scale = common_denominator([Ratio64::new(1, h.resolution() as i64), gamma.ratio()]);
    let sep = Separation { values: dedup.class.numerators_on(scale)?, two_g: 2 * gamma.numer_on(scale)? };
    let all: Vec<usize> = (0..dedup.class.len()).collect();
    let best = if all.len() <= k {
        all
    } else {
        // Greedy seed in row order.
        let mut greedy: Vec<usize> = Vec::new();
        let mut cands = all.clone();
        while let Some((&r, rest)) = cands.split_first() {
            let bnb = Bnb { sep: &sep, k, best: vec![], budget: 0 };
            let next = bnb.filter(&greedy, r, rest);
            greedy.push(r);
            cands = next;
        }
        let mut bnb = Bnb { sep: &sep, k, best: greedy, budget: caps.node_budget };
        bnb.run(&mut Vec::new(), all)?;
        bnb.best
    };
    let mut separators = Vec::new();
    if best.len() > k {
        for_each_subset(&best, k + 1, &mut |t| {
            let x = sep.point(t).expect("packing members are separated");
            separators.push((t.iter().map(|&r| dedup.origin[r]).collect(), x));
            true
        });
    }
    let rows = best.iter().map(|&r| dedup.origin[r]).collect();
    Ok((best.len(), PackingWitness { rows, separators }))
}

/// Independent check that a witness family is `(k+1)`-wise separated.
pub fn verify_packing_witness(h: &HypothesisClass, gamma: Scale, k: usize, w: &PackingWitness) -> Result<()> {
    let g2 = gamma.ratio() * 2;
    let mut ok = true;
    if w.rows.len() > k {
        for_each_subset(&w.rows, k + 1, &mut |t| {
            let sep = (0..h.domain_size()).any(|x| {
                let mut vals: Vec<Ratio64> = t.iter().map(|&r| h.value(r, x).expect("total").ratio()).collect();
                vals.sort();
                vals.windows(2).all(|p| p[1] - p[0] >= g2)
            });
            ok &= sep;
            sep
        });
    }
    let mut distinct = w.rows.iter().map(|&r| h.rows()[r].clone()).collect::<Vec<_>>();
    distinct.sort();
    distinct.dedup();
    if !ok || distinct.len() != w.rows.len() {
        return Err(Error::Precondition("packing witness is not separated".into()));
    }
    Ok(())
}

/// All quantities of the packing sandwich on one class.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub k: usize,
    pub points: usize,
    pub labels: usize,
    pub packing: usize,
    pub strong_dim: usize,
    pub fat_dim: usize,
    pub y: BigInt,
    pub exponent: u32,
    pub upper_bound: BigInt,
    pub lower_bound: u128,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.upper_ok && self.lower_ok
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "k": self.k,
            "points": self.points,
            "labels": self.labels,
            "packing": self.packing,
            "strong_dim": self.strong_dim,
            "fat_dim": self.fat_dim,
            "y": self.y.to_string(),
            "exponent": self.exponent,
            "upper_bound": self.upper_bound.to_string(),
            "lower_bound": self.lower_bound.to_string(),
            "upper_ok": self.upper_ok,
            "lower_ok": self.lower_ok,
        })
    }
}

/// Smallest `e >= 0` with `((k+1)/k)^e >= y`; zero when `y <= 1`.
pub fn log_ceiling(y: &BigInt, k: usize) -> u32 {
    let mut e = 0u32;
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    while num < y * &den {
        num *= k + 1;
        den *= k;
        e += 1;
    }
    e
}

/// Upper bound `(k+1) [(k+1) B^{k+1} n]^e` with `y = sum_{i=1}^{d} C(n,i) C(B,k+1)^i`.
/// `e` is at least 1 once `d >= 1`: with `y = 1` the bare `e = 0` gives `k+1`, which `k+1`
/// constant rows on one point already reach.
pub fn packing_upper_bound(k: usize, labels: usize, points: usize, strong_dim: usize) -> (BigInt, u32, BigInt) {
    let per = binomial(labels as u64, (k + 1) as u64);
    let mut y = BigInt::zero();
    for i in 1..=strong_dim {
        y += binomial(points as u64, i as u64) * num_traits::pow(per.clone(), i);
    }
    let e = if strong_dim == 0 { 0 } else { log_ceiling(&y, k).max(1) };
    let inner = BigInt::from(k + 1) * num_traits::pow(BigInt::from(labels), k + 1) * BigInt::from(points);
    (y.clone(), e, BigInt::from(k + 1) * num_traits::pow(inner, e as usize))
}

/// Lower bound `floor(((k+1)/3) exp(d (k+1)! / (k+1)^{k+2}))`.
pub fn packing_lower_bound(k: usize, fat_dim: usize) -> u128 {
    let kp = (k + 1) as f64;
    let fact: f64 = (1..=k + 1).map(|i| i as f64).product();
    let v = (kp / 3.0) * (fat_dim as f64 * fact / kp.powi(k as i32 + 2)).exp();
    if v >= u128::MAX as f64 {
        u128::MAX
    } else {
        v.floor() as u128
    }
}

/// Computes packing, strong and fat dimensions and checks both packing bounds.
pub fn packing_sandwich_check(h: &HypothesisClass, gamma: Scale, k: usize) -> Result<SandwichReport> {
    packing_sandwich_check_with(h, gamma, k, &SearchCaps::default())
}

pub fn packing_sandwich_check_with(h: &HypothesisClass, gamma: Scale, k: usize, caps: &SearchCaps) -> Result<SandwichReport> {
    if h.is_empty() {
        return Err(Error::Precondition("packing sandwich needs a nonempty class".into()));
    }
    let (packing, _) = k_ary_packing_with(h, gamma, k, caps)?;
    let strong_dim = strong_fat_dim_with(h, gamma, k, caps)?.dimension;
    let fat = fat_dim_with(h, gamma, k, caps)?.dimension;
    let labels = h.label_count();
    let points = h.domain_size();
    let (y, exponent, upper_bound) = packing_upper_bound(k, labels, points, strong_dim);
    let lower_bound = packing_lower_bound(k, fat);
    Ok(SandwichReport {
        k,
        points,
        labels,
        packing,
        strong_dim,
        fat_dim: fat,
        upper_ok: BigInt::from(packing) < upper_bound,
        lower_ok: packing as u128 >= lower_bound,
        y,
        exponent,
        upper_bound,
        lower_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_pairwise_separated() {
        let h = HypothesisClass::total(1, 4, vec![vec![0], vec![1], vec![2]]).unwrap();
        let (m, w) = k_ary_packing(&h, Scale::new(1, 8).unwrap(), 2).unwrap();
        assert_eq!(m, 3);
        verify_packing_witness(&h, Scale::new(1, 8).unwrap(), 2, &w).unwrap();
    }

    #[test]
    fn small_classes_pack_vacuously() {
        let h = HypothesisClass::total(1, 10, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(k_ary_packing(&h, Scale::new(1, 2).unwrap(), 2).unwrap().0, 2);
    }

    #[test]
    fn log_ceiling_matches_float_log() {
        assert_eq!(log_ceiling(&BigInt::from(7), 2), 5);
        assert_eq!(log_ceiling(&BigInt::from(1), 2), 0);
        assert_eq!(log_ceiling(&BigInt::from(0), 1), 0);
        assert_eq!(log_ceiling(&BigInt::from(8), 1), 3);
        assert_eq!(log_ceiling(&BigInt::from(9), 1), 4);
    }

    #[test]
    fn singleton_sandwich_passes() {
        let h = HypothesisClass::total(2, 10, vec![vec![1, 2]]).unwrap();
        let r = packing_sandwich_check(&h, Scale::new(1, 20).unwrap(), 2).unwrap();
        assert_eq!(r.packing, 1);
        assert!(r.passed());
    }
}
