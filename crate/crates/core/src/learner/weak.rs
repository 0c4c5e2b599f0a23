//! One-inclusion-graph weak list learners.
//!
//! Both learners project the class onto the sample points plus the query, in
//! increasing point order so that every leave-one-out split of one point set
//! yields the same graph and hence the same orientation. They orient that
//! graph with minimum maximum (scaled) `k`-outdegree and read off the oriented
//! members of the edge that the sample pins down in the query's direction. A query that already appears in the sample is answered
//! with its sample label, because that "edge" is the single sample vertex.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::grid::{common_denominator, Ratio64};
use crate::model::{ClassKind, GridValue, HypothesisClass, LabelList, LabeledSample, Scale};
use crate::oig::{min_max_k_outdeg, value_cover, OneInclusionGraph, OrientMode};

use super::aggregate::MulticlassList;

/// Orients the graph on `rows` and returns the query-column values oriented on the edge
/// through the vertex that matches `pinned` (column, value) pairs; `None` when no vertex matches.
fn oriented_edge_values(rows: &[Vec<i64>], query_col: usize, pinned: &[(usize, i64)], gamma: i64, k: usize) -> Result<Option<Vec<i64>>> {
    let Some(row) = rows.iter().find(|r| pinned.iter().all(|&(c, v)| r[c] == v)) else {
        return Ok(None);
    };
    let members: Vec<i64> = rows.iter().filter(|r| pinned.iter().all(|&(c, v)| r[c] == v)).map(|r| r[query_col]).collect();
    // Such an edge is oriented to this cover in every optimal orientation.
    if let Some(cover) = value_cover(members, gamma, k) {
        return Ok(Some(cover));
    }
    let g = OneInclusionGraph::from_rows(rows)?;
    let vertex = g.vertex_index(row).expect("row is a vertex");
    let sigma = min_max_k_outdeg(&g, gamma, k, OrientMode::Exact)?.orientation;
    let edge = g.edge_of(vertex, query_col);
    Ok(Some(sigma.choice[edge].iter().map(|&u| g.vertices()[u][query_col]).collect()))
}

/// Column of sample column `c` once the query column is inserted at `qcol`.
fn shifted(c: usize, qcol: usize) -> usize {
    if c < qcol {
        c
    } else {
        c + 1
    }
}

/// Weak learner for a partial multiclass class, trained on one sample.
#[derive(Clone, Debug)]
pub struct PartialOigLearner<'a> {
    class: &'a HypothesisClass,
    k: usize,
    /// Distinct sample points, sorted.
    points: Vec<usize>,
    /// Sample label per point; `None` when the sample disagrees with itself there.
    labels: Vec<Option<u32>>,
    /// Rows defined on every sample point.
    defined: Vec<usize>,
    /// Answers keyed by the query column over `defined`, which determines them.
    cache: RefCell<HashMap<Vec<Option<u32>>, MulticlassList>>,
}

impl<'a> PartialOigLearner<'a> {
    pub fn new(class: &'a HypothesisClass, sample: &[(usize, u32)], k: usize) -> Result<Self> {
        if class.kind() != ClassKind::Partial {
            return Err(Error::InvalidClass("the partial weak learner needs a partial class".into()));
        }
        if k == 0 {
            return Err(Error::Precondition("list size k must be at least 1".into()));
        }
        if let Some(&(x, _)) = sample.iter().find(|p| p.0 >= class.domain_size()) {
            return Err(Error::UndefinedPoint(x));
        }
        let mut points: Vec<usize> = sample.iter().map(|p| p.0).collect();
        points.sort_unstable();
        points.dedup();
        let labels = points
            .iter()
            .map(|&x| {
                let mut it = sample.iter().filter(|p| p.0 == x).map(|p| p.1);
                let first = it.next().expect("point comes from the sample");
                it.all(|y| y == first).then_some(first)
            })
            .collect();
        let defined = (0..class.len()).filter(|&r| points.iter().all(|&x| class.entry(r, x).is_some())).collect();
        Ok(Self { class, k, points, labels, defined, cache: RefCell::default() })
    }

    pub fn predict(&self, query: usize) -> Result<MulticlassList> {
        if query >= self.class.domain_size() {
            return Err(Error::UndefinedPoint(query));
        }
        let fallback = MulticlassList::fallback(self.k);
        if let Ok(i) = self.points.binary_search(&query) {
            return Ok(self.labels[i].map_or(fallback, |y| MulticlassList::new(vec![y])));
        }
        if self.labels.iter().any(Option::is_none) {
            return Ok(fallback);
        }
        let key: Vec<Option<u32>> = self.defined.iter().map(|&r| self.class.entry(r, query)).collect();
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let qcol = self.points.partition_point(|&p| p < query);
        let rows: Vec<Vec<i64>> = self
            .defined
            .iter()
            .zip(&key)
            .filter_map(|(&r, q)| {
                let mut v: Vec<i64> = self.points.iter().map(|&x| self.class.entry(r, x).expect("defined") as i64).collect();
                v.insert(qcol, (*q)? as i64);
                Some(v)
            })
            .collect();
        let pinned: Vec<(usize, i64)> =
            self.labels.iter().enumerate().map(|(c, y)| (shifted(c, qcol), y.expect("consistent") as i64)).collect();
        let answer = match oriented_edge_values(&rows, qcol, &pinned, 0, self.k)? {
            Some(v) => MulticlassList::new(v.into_iter().map(|y| y as u32).collect()),
            None => fallback,
        };
        self.cache.borrow_mut().insert(key, answer.clone());
        Ok(answer)
    }
}

/// One prediction of the partial-class weak learner.
pub fn weak_learner_partial(hpart: &HypothesisClass, sample: &[(usize, u32)], query: usize, k: usize) -> Result<MulticlassList> {
    PartialOigLearner::new(hpart, sample, k)?.predict(query)
}

/// Weak learner for a total real-valued class at scale `gamma`, trained on a realizable sample.
#[derive(Clone, Debug)]
pub struct RealOigLearner<'a> {
    class: &'a HypothesisClass,
    k: usize,
    scale: i64,
    gamma: i64,
    points: Vec<usize>,
    labels: Vec<i64>,
    /// Answers keyed by the query column over all rows.
    cache: RefCell<HashMap<Vec<i64>, LabelList>>,
}

impl<'a> RealOigLearner<'a> {
    pub fn new(class: &'a HypothesisClass, sample: &LabeledSample, gamma: Scale, k: usize) -> Result<Self> {
        class.require_total()?;
        if k == 0 {
            return Err(Error::Precondition("list size k must be at least 1".into()));
        }
        sample.check_domain(class.domain_size())?;
        if !sample.is_realizable_by(class) {
            return Err(Error::Unrealizable);
        }
        let scale = common_denominator(
            sample.pairs.iter().map(|p| p.1.ratio()).chain([Ratio64::new(1, class.resolution() as i64), gamma.ratio()]),
        );
        let mut points: Vec<usize> = sample.pairs.iter().map(|p| p.0).collect();
        points.sort_unstable();
        points.dedup();
        let labels = points
            .iter()
            .map(|&x| {
                let y = sample.pairs.iter().find(|p| p.0 == x).expect("sample point").1;
                y.numer_on(scale).expect("scale covers sample labels")
            })
            .collect();
        Ok(Self { class, k, scale, gamma: gamma.numer_on(scale)?, points, labels, cache: RefCell::default() })
    }

    pub fn predict(&self, query: usize) -> Result<LabelList> {
        if query >= self.class.domain_size() {
            return Err(Error::UndefinedPoint(query));
        }
        let value = |n: i64| GridValue::new(n, self.scale).expect("numerator within scale");
        if let Ok(i) = self.points.binary_search(&query) {
            return Ok(LabelList::single(value(self.labels[i])));
        }
        let f = self.scale / self.class.resolution() as i64;
        let key: Vec<i64> = self.class.rows().iter().map(|r| r[query].expect("total") as i64 * f).collect();
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let qcol = self.points.partition_point(|&p| p < query);
        let rows: Vec<Vec<i64>> = self
            .class
            .rows()
            .iter()
            .zip(&key)
            .map(|(r, &q)| {
                let mut v: Vec<i64> = self.points.iter().map(|&x| r[x].expect("total") as i64 * f).collect();
                v.insert(qcol, q);
                v
            })
            .collect();
        let pinned: Vec<(usize, i64)> = self.labels.iter().enumerate().map(|(c, &y)| (shifted(c, qcol), y)).collect();
        let values = oriented_edge_values(&rows, qcol, &pinned, self.gamma, self.k)?.ok_or(Error::Unrealizable)?;
        let answer = LabelList::new(values.into_iter().map(value).collect());
        self.cache.borrow_mut().insert(key, answer.clone());
        Ok(answer)
    }
}

/// One prediction of the real-valued weak learner.
pub fn weak_learner_real(h: &HypothesisClass, sample: &LabeledSample, query: usize, gamma: Scale, k: usize) -> Result<LabelList> {
    RealOigLearner::new(h, sample, gamma, k)?.predict(query)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::build_example2;
    use crate::model::gamma_contains;

    #[test]
    fn single_row_partial_class_predicts_its_label() {
        let h = HypothesisClass::new(3, 2, ClassKind::Partial, vec![vec![Some(0), Some(2), Some(1)]]).unwrap();
        let mu = weak_learner_partial(&h, &[(0, 0)], 2, 2).unwrap();
        assert!(mu.contains(1));
    }

    #[test]
    fn small_edges_are_kept_whole() {
        let rows = vec![vec![Some(0), Some(0)], vec![Some(0), Some(1)], vec![Some(1), Some(2)]];
        let h = HypothesisClass::new(2, 2, ClassKind::Partial, rows).unwrap();
        assert_eq!(weak_learner_partial(&h, &[(0, 0)], 1, 2).unwrap().labels(), &[0, 1]);
    }

    #[test]
    fn unrealizable_partial_sample_falls_back() {
        let h = HypothesisClass::new(2, 2, ClassKind::Partial, vec![vec![Some(0), None]]).unwrap();
        assert_eq!(weak_learner_partial(&h, &[(0, 1)], 1, 2).unwrap(), MulticlassList::fallback(2));
        assert_eq!(weak_learner_partial(&h, &[(0, 0)], 1, 2).unwrap(), MulticlassList::fallback(2));
    }

    #[test]
    fn memorizes_sample_points() {
        let h = HypothesisClass::new(2, 2, ClassKind::Partial, vec![vec![Some(0), Some(1)], vec![Some(2), Some(1)]]).unwrap();
        assert_eq!(weak_learner_partial(&h, &[(0, 2)], 0, 1).unwrap().labels(), &[2]);
    }

    #[test]
    fn real_learner_on_single_hypothesis() {
        let h = HypothesisClass::total(3, 4, vec![vec![1, 2, 3]]).unwrap();
        let s = LabeledSample::new(vec![(0, GridValue::new(1, 4).unwrap())]);
        let mu = weak_learner_real(&h, &s, 2, Scale::new(1, 8).unwrap(), 1).unwrap();
        assert_eq!(mu, LabelList::single(GridValue::new(3, 4).unwrap()));
    }

    #[test]
    fn real_learner_rejects_unrealizable_samples() {
        let h = HypothesisClass::total(1, 4, vec![vec![1]]).unwrap();
        let s = LabeledSample::new(vec![(0, GridValue::new(1, 2).unwrap())]);
        assert!(matches!(RealOigLearner::new(&h, &s, Scale::new(1, 8).unwrap(), 1), Err(Error::Unrealizable)));
    }

    #[test]
    fn example_two_with_two_lists_always_contains_the_label() {
        let h = build_example2(2).unwrap();
        let gamma = Scale::new(1, 4).unwrap();
        for r in 0..h.len() {
            let s = LabeledSample::new(vec![(0, h.value(r, 0).unwrap())]);
            let mu = weak_learner_real(&h, &s, 1, gamma, 2).unwrap();
            assert!(gamma_contains(&mu, h.value(r, 1).unwrap(), gamma));
        }
    }
}
