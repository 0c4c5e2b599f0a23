//! Discrete label lists and the two aggregation rules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GridValue, LabelList};

/// Sorted, duplicate-free list of discrete labels `0..=k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MulticlassList(Vec<u32>);

impl MulticlassList {
    pub fn new(mut labels: Vec<u32>) -> Self {
        labels.sort_unstable();
        labels.dedup();
        Self(labels)
    }

    /// `{0, ..., k-1}`, the answer when no completion of the sample exists.
    pub fn fallback(k: usize) -> Self {
        Self((0..k as u32).collect())
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The `k` most frequent labels over all lists; ties go to the smaller label.
pub fn topk_aggregate(lists: &[MulticlassList], k: usize) -> Result<MulticlassList> {
    if lists.is_empty() {
        return Err(Error::Precondition("top-k aggregation needs at least one list".into()));
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for l in lists {
        for &y in l.labels() {
            *counts.entry(y).or_default() += 1;
        }
    }
    let mut ranked: Vec<(u32, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(MulticlassList::new(ranked.into_iter().take(k).map(|(y, _)| y).collect()))
}

/// Elements at 1-based positions `ceil(jN/(k+1))`, `j = 1..=k`, of the sorted concatenation.
pub fn quantile_aggregate(lists: &[LabelList], k: usize) -> Result<LabelList> {
    let mut all: Vec<GridValue> = lists.iter().flat_map(|l| l.values().iter().copied()).collect();
    if all.is_empty() {
        return Err(Error::EmptyPrediction);
    }
    all.sort();
    let n = all.len();
    let picks = (1..=k).map(|j| all[(j * n).div_ceil(k + 1) - 1]).collect();
    Ok(LabelList::new(picks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> MulticlassList {
        MulticlassList::new(v.to_vec())
    }

    fn g(p: i64, q: i64) -> GridValue {
        GridValue::new(p, q).unwrap()
    }

    #[test]
    fn topk_examples() {
        assert_eq!(topk_aggregate(&[m(&[1, 2]), m(&[1, 3]), m(&[1, 2])], 2).unwrap(), m(&[1, 2]));
        assert_eq!(topk_aggregate(&[m(&[0, 2]), m(&[0, 2])], 2).unwrap(), m(&[0, 2]));
        assert_eq!(topk_aggregate(&[m(&[3]), m(&[1])], 1).unwrap(), m(&[1]));
        assert!(topk_aggregate(&[], 1).is_err());
    }

    #[test]
    fn quantile_examples() {
        let lists = [LabelList::new(vec![g(1, 10)]), LabelList::new(vec![g(2, 10)]), LabelList::new(vec![g(9, 10)])];
        assert_eq!(quantile_aggregate(&lists, 1).unwrap(), LabelList::single(g(2, 10)));
        let one = LabelList::new(vec![g(1, 4), g(3, 4)]);
        assert_eq!(quantile_aggregate(std::slice::from_ref(&one), 2).unwrap(), one);
    }
}
