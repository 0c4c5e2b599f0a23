//! Union-plus-intersection inequalities for `k+1` sets and events.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::grid::{exact_string, Exact};
use crate::error::{Error, Result};

/// For `k+1` sets each of size at least `m`: `|union| + |intersection| >= (k+1)/k * m`.
pub fn union_intersection_check(sets: &[BTreeSet<usize>], m: usize) -> Result<bool> {
    if sets.len() < 2 {
        return Err(Error::Precondition("need at least two sets".into()));
    }
    if let Some(s) = sets.iter().find(|s| s.len() < m) {
        return Err(Error::Precondition(format!("a set has {} < {m} elements", s.len())));
    }
    let k = sets.len() - 1;
    let union: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    let inter = sets[0].iter().filter(|x| sets[1..].iter().all(|s| s.contains(x))).count();
    // Compare k * (|U| + |I|) >= (k + 1) * m in integers.
    Ok(k * (union.len() + inter) >= (k + 1) * m)
}

/// For `k+1` events (sets of outcome indices) each with probability above `c`:
/// `Pr[union] + Pr[intersection] > (k+1)/k * c`.
pub fn union_intersection_prob_check(masses: &[Exact], events: &[BTreeSet<usize>], c: &Exact) -> Result<bool> {
    if events.len() < 2 {
        return Err(Error::Precondition("need at least two events".into()));
    }
    let total: Exact = masses.iter().cloned().sum();
    if total != Exact::from_integer(BigInt::from(1)) || masses.iter().any(|m| m < &Exact::zero()) {
        return Err(Error::Precondition("outcome masses must be nonnegative and sum to 1".into()));
    }
    if let Some(&bad) = events.iter().flatten().find(|&&o| o >= masses.len()) {
        return Err(Error::Precondition(format!("outcome {bad} is outside the space")));
    }
    let prob = |set: &mut dyn Iterator<Item = usize>| -> Exact { set.map(|o| masses[o].clone()).sum() };
    for e in events {
        let p = prob(&mut e.iter().copied());
        if &p <= c {
            return Err(Error::Precondition(format!("an event has probability {} <= c", exact_string(&p))));
        }
    }
    let k = events.len() - 1;
    let union: BTreeSet<usize> = events.iter().flatten().copied().collect();
    let inter = events[0].iter().copied().filter(|x| events[1..].iter().all(|s| s.contains(x)));
    let lhs = prob(&mut union.iter().copied()) + prob(&mut inter.collect::<Vec<_>>().into_iter());
    let rhs = Exact::new(BigInt::from(k + 1), BigInt::from(k)) * c;
    Ok(lhs > rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn tight_three_set_example() {
        let sets = [set(&[1, 2]), set(&[2, 3]), set(&[1, 3])];
        assert!(union_intersection_check(&sets, 2).unwrap());
        assert!(matches!(union_intersection_check(&sets, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn identical_sets() {
        let s = set(&[4, 5, 6]);
        assert!(union_intersection_check(&[s.clone(), s.clone(), s], 3).unwrap());
    }

    #[test]
    fn probability_version() {
        let m = |n: i64, d: i64| Exact::new(BigInt::from(n), BigInt::from(d));
        let masses = vec![m(1, 3), m(1, 3), m(1, 3)];
        let events = [set(&[0, 1]), set(&[1, 2]), set(&[0, 2])];
        assert!(union_intersection_prob_check(&masses, &events, &m(1, 2)).unwrap());
        assert!(union_intersection_prob_check(&masses, &events, &m(2, 3)).is_err());
    }
}
