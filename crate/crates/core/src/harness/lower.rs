//! Lower-bound constructions: the strong-shattering family `D_b`, the one-heavy-point family `P_v`
//! and the pigeonhole kernel behind the minimum-error argument.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dimensions::ShatterWitness;
use crate::error::{Error, Result};
use crate::model::grid::to_exact;
use crate::model::{abs_list_loss, Atom, Exact, FiniteDistribution, GridValue, HypothesisClass, LabelList, Scale};

/// Uniform over the witness points, labelled by the anchors that pattern `b` selects.
pub fn build_db_distribution(h: &HypothesisClass, witness: &ShatterWitness, b: &[u8]) -> Result<FiniteDistribution> {
    let d = witness.points.len();
    if d == 0 {
        return Err(Error::Precondition("the witness shatters no points".into()));
    }
    if b.len() != d {
        return Err(Error::Precondition(format!("pattern has length {} but the witness has {d} points", b.len())));
    }
    if witness.anchors.len() != d {
        return Err(Error::Precondition("witness needs one anchor vector per point".into()));
    }
    if let Some(&x) = witness.points.iter().find(|&&x| x >= h.domain_size()) {
        return Err(Error::UndefinedPoint(x));
    }
    let mass = Exact::new(BigInt::one(), BigInt::from(d));
    let mut support = Vec::with_capacity(d);
    for (i, (&point, &bi)) in witness.points.iter().zip(b).enumerate() {
        let label = witness.anchors[i]
            .get(bi as usize)
            .ok_or_else(|| Error::Precondition(format!("pattern entry {bi} exceeds the anchors at position {i}")))?;
        support.push(Atom { point, label: GridValue::from_ratio(*label)?, mass: mass.clone() });
    }
    FiniteDistribution::new(support)
}

/// Exact square root of a nonnegative rational, when it is a square.
fn rational_sqrt(r: &Exact) -> Option<Exact> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Exact::new(n, d))
}

/// Mass `1 - 24(k+1)sqrt(eps)` on the first point labelled by row `vertex`, the rest uniform over
/// the other points. `h` is the class projected onto its `n0 >= 2` points.
pub fn build_pv_distribution(h: &HypothesisClass, vertex: usize, eps: &Exact, k: usize) -> Result<FiniteDistribution> {
    let n0 = h.domain_size();
    if n0 < 2 {
        return Err(Error::Precondition(format!("the construction needs at least two points, got {n0}")));
    }
    if vertex >= h.len() {
        return Err(Error::Precondition(format!("vertex {vertex} is not a row of a class with {} rows", h.len())));
    }
    let root = rational_sqrt(eps).ok_or_else(|| Error::Precondition("eps must be the square of a rational".into()))?;
    let spread = Exact::from_integer(BigInt::from(24 * (k + 1))) * root;
    let heavy = Exact::one() - &spread;
    if heavy.is_negative() || spread.is_negative() {
        return Err(Error::InvalidDistribution(format!("eps is too large: heavy mass {heavy}")));
    }
    let light = spread / Exact::from_integer(BigInt::from(n0 - 1));
    let label = |x: usize| h.value(vertex, x).ok_or(Error::InvalidClass(format!("row {vertex} is undefined at {x}")));
    let mut support = vec![Atom { point: 0, label: label(0)?, mass: heavy }];
    for x in 1..n0 {
        support.push(Atom { point: x, label: label(x)?, mass: light.clone() });
    }
    FiniteDistribution::new(support)
}

/// Whether the average loss of `mu` over `k+1` labels, pairwise at least `2 gamma` apart, is at
/// least `2 gamma / (k+1)`. `mu` may hold at most `k` values.
pub fn pigeonhole_error_check(mu: &LabelList, labels: &[GridValue], gamma: Scale) -> Result<bool> {
    if labels.len() < 2 {
        return Err(Error::Precondition("the check needs k+1 >= 2 labels".into()));
    }
    let k = labels.len() - 1;
    if mu.is_empty() || mu.len() > k {
        return Err(Error::Precondition(format!("list size {} is outside 1..={k}", mu.len())));
    }
    let two_gamma = gamma.ratio() * 2;
    for (i, a) in labels.iter().enumerate() {
        if let Some(b) = labels[i + 1..].iter().find(|b| a.abs_diff(**b) < two_gamma) {
            return Err(Error::Precondition(format!("labels {a} and {b} are closer than 2*gamma")));
        }
    }
    let mut total = Exact::zero();
    for &c in labels {
        total += to_exact(abs_list_loss(mu, c)?);
    }
    // total / (k+1) >= 2 gamma / (k+1)  iff  total >= 2 gamma.
    Ok(total >= to_exact(two_gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::build_example1;
    use crate::dimensions::strong_fat_dim;
    use crate::model::population_error;
    use crate::model::ListHypothesis;

    fn v(n: i64, d: i64) -> GridValue {
        GridValue::new(n, d).unwrap()
    }

    #[test]
    fn pigeonhole_tight_example() {
        let ok = pigeonhole_error_check(&LabelList::single(v(1, 2)), &[v(3, 10), v(7, 10)], Scale::new(1, 5).unwrap()).unwrap();
        assert!(ok);
        assert!(pigeonhole_error_check(&LabelList::single(v(1, 2)), &[v(3, 10), v(1, 2)], Scale::new(1, 5).unwrap()).is_err());
    }

    #[test]
    fn pv_masses() {
        let h = HypothesisClass::total(3, 4, vec![vec![1, 2, 3]]).unwrap();
        let half = build_pv_distribution(&h, 0, &Exact::new(1.into(), 9216.into()), 1).unwrap();
        assert_eq!(half.marginal(0), Exact::new(1.into(), 2.into()));
        assert_eq!(half.marginal(1), Exact::new(1.into(), 4.into()));
        let edge = build_pv_distribution(&h, 0, &Exact::new(1.into(), 2304.into()), 1).unwrap();
        assert!(edge.marginal(0).is_zero());
        assert!(build_pv_distribution(&h, 0, &Exact::new(1.into(), 100.into()), 1).is_err());
        assert!(build_pv_distribution(&h, 0, &Exact::new(1.into(), 2.into()), 1).is_err());
    }

    #[test]
    fn db_is_realized_by_the_witness_row() {
        let h = build_example1(3).unwrap();
        let w = strong_fat_dim(&h, Scale::new(1, 20).unwrap(), 2).unwrap().witness;
        for (pattern, row) in &w.assignment {
            let d = build_db_distribution(&h, &w, pattern).unwrap();
            let f_b = ListHypothesis { predictions: (0..3).map(|x| LabelList::single(h.value(*row, x).unwrap())).collect() };
            assert!(population_error(&f_b, &d).unwrap().is_zero());
        }
        assert!(build_db_distribution(&h, &w, &[0, 0]).is_err());
        assert!(build_db_distribution(&h, &w, &[0, 0, 3]).is_err());
    }
}
