//! Seeded fixture generators shared by the verification suite, the tests and the examples.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::learner::{classifier_f, separated_set, weak_learner_real, MulticlassList, ThresholdGrid};
use crate::model::grid::common_denominator;
use crate::model::{gamma_contains, GridValue, HypothesisClass, LabeledSample, Ratio64, Scale};
use crate::oig::{k_outdeg, min_max_k_outdeg, OneInclusionGraph, OrientMode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Total class with `rows` distinct rows (fewer if the grid is too small) over `points` points,
/// entries drawn uniformly from `0..=resolution`.
pub fn random_total_class(points: usize, rows: usize, resolution: u32, seed: u64) -> Result<HypothesisClass> {
    let mut r = rng(seed);
    let mut out: Vec<Vec<u32>> = Vec::new();
    let capacity = (resolution as u64 + 1).checked_pow(points as u32).unwrap_or(u64::MAX);
    let target = rows.min(capacity.min(usize::MAX as u64) as usize).max(1);
    while out.len() < target {
        let row: Vec<u32> = (0..points).map(|_| r.random_range(0..=resolution)).collect();
        if !out.contains(&row) {
            out.push(row);
        }
    }
    HypothesisClass::total(points, resolution, out)
}

/// Random list over `0..=k` with between one and `k` labels.
pub fn random_multiclass_list(r: &mut ChaCha8Rng, k: usize) -> MulticlassList {
    let mut labels: Vec<u32> = (0..=k as u32).collect();
    labels.shuffle(r);
    let size = r.random_range(1..=k);
    MulticlassList::new(labels[..size].to_vec())
}

/// Sample labelling `points` by row `row`.
pub fn row_sample(h: &HypothesisClass, row: usize, points: &[usize]) -> LabeledSample {
    LabeledSample::new(points.iter().map(|&x| (x, h.value(row, x).expect("total class"))).collect())
}

/// Held-out misses of the real-valued one-inclusion learner and the outdegree of the true vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeaveOneOut {
    pub misses: usize,
    pub outdeg: usize,
    pub size: usize,
}

/// Runs the weak learner on every leave-one-out split of the distinct `points` labelled by `row`
/// and, independently, orients the graph on all of `points` and reads the row's outdegree.
pub fn leave_one_out(h: &HypothesisClass, row: usize, points: &[usize], gamma: Scale, k: usize) -> Result<LeaveOneOut> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != points.len() || points.len() < 2 {
        return Err(Error::Precondition("leave-one-out needs at least two distinct points".into()));
    }
    let mut misses = 0;
    for (i, &x) in sorted.iter().enumerate() {
        let rest: Vec<usize> = sorted.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
        let mu = weak_learner_real(h, &row_sample(h, row, &rest), x, gamma, k)?;
        if !gamma_contains(&mu, h.value(row, x).expect("total class"), gamma) {
            misses += 1;
        }
    }
    let labels = row_sample(h, row, &sorted);
    let scale = common_denominator(
        labels.pairs.iter().map(|p| p.1.ratio()).chain([Ratio64::new(1, h.resolution() as i64), gamma.ratio()]),
    );
    let f = scale / h.resolution() as i64;
    let rows: Vec<Vec<i64>> = h.rows().iter().map(|r| sorted.iter().map(|&x| r[x].expect("total") as i64 * f).collect()).collect();
    let g = OneInclusionGraph::from_rows(&rows)?;
    let truth: Vec<i64> = sorted.iter().map(|&x| h.entry(row, x).expect("total") as i64 * f).collect();
    let vertex = g.vertex_index(&truth).expect("row is a vertex");
    let gamma_num = gamma.numer_on(scale)?;
    let sigma = min_max_k_outdeg(&g, gamma_num, k, OrientMode::Exact)?.orientation;
    let outdeg = k_outdeg(&g, vertex, &sigma, gamma_num)?;
    Ok(LeaveOneOut { misses, outdeg, size: sorted.len() })
}

/// Grid values `0, 1/q, ..., 1`.
pub fn grid_values(q: i64) -> Vec<GridValue> {
    (0..=q).map(|i| GridValue::new(i, q).expect("on grid")).collect()
}

/// Lists per threshold that contain the truthful label `f(a, tau)` on every threshold separated
/// from `a`, padded with random labels up to `k`; unconstrained thresholds get random lists.
pub fn compliant_lists(grid: &ThresholdGrid, a: Ratio64, r: &mut ChaCha8Rng) -> Vec<MulticlassList> {
    let k = grid.k();
    let separated = separated_set(a, grid);
    (0..grid.len())
        .map(|t| {
            if separated.binary_search(&t).is_err() {
                return random_multiclass_list(r, k);
            }
            let mut labels = vec![classifier_f(a, grid.tau(t))];
            let extra = r.random_range(0..k);
            labels.extend((0..extra).map(|_| r.random_range(0..=k as u32)));
            MulticlassList::new(labels)
        })
        .collect()
}
