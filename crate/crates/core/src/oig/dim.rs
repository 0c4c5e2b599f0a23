//! `(gamma, k)`-OIG dimension on finite projections.

use serde_json::Value;

use super::graph::OneInclusionGraph;
use super::orient::{forces_outdeg, has_hard_edge, OrientCaps};
use crate::error::{Error, Result};
use crate::model::grid::{common_denominator, Ratio64};
use crate::model::{HypothesisClass, Scale};

/// Smallest outdegree that witnesses dimension at projection length `n`.
/// `k = 1` uses `deg > n/3`; larger `k` uses `deg >= n/(2(k+1))`.
pub fn witness_threshold(n: usize, k: usize) -> usize {
    if k == 1 {
        n / 3 + 1
    } else {
        n.div_ceil(2 * (k + 1)).max(1)
    }
}

#[derive(Clone, Debug)]
pub struct OigDimOptions {
    pub n_max: usize,
    /// Induced subgraphs are enumerated exhaustively only up to this many vertices.
    pub vertex_cap: usize,
    pub orient: OrientCaps,
}

impl Default for OigDimOptions {
    fn default() -> Self {
        Self { n_max: 3, vertex_cap: 12, orient: OrientCaps::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OigWitness {
    pub points: Vec<usize>,
    /// Rows of the projected class (label vectors on `points`, numerators over `scale`).
    pub vertices: Vec<Vec<i64>>,
    pub scale: i64,
    pub threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OigDimResult {
    pub dimension: usize,
    /// True when every projection length up to `n_max` was decided without hitting a cap.
    pub exact_up_to_n_max: bool,
    pub n_max: usize,
    pub witness: Option<OigWitness>,
    /// Projection lengths whose search was cut short; their outcome is a lower bound only.
    pub undecided: Vec<usize>,
}

impl OigDimResult {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "dimension": self.dimension,
            "exactness": if self.exact_up_to_n_max { "exact_up_to_n_max" } else { "lower_bound" },
            "n_max": self.n_max,
            "undecided": self.undecided,
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "points": w.points,
                "scale": w.scale,
                "threshold": w.threshold,
                "vertices": w.vertices,
            })),
        })
    }
}

enum Outcome {
    Witness(Vec<Vec<i64>>),
    None,
    Undecided,
}

fn examine(g: &OneInclusionGraph, gamma: i64, k: usize, threshold: usize, opts: &OigDimOptions) -> Outcome {
    // Edges with at most k members stay coverable in every induced subgraph.
    if g.edges().iter().all(|e| e.members.len() <= k) {
        return Outcome::None;
    }
    match forces_outdeg(g, gamma, k, threshold, &opts.orient) {
        Ok(true) => return Outcome::Witness(g.vertices().to_vec()),
        Ok(false) => {}
        Err(_) => return Outcome::Undecided,
    }
    let nv = g.vertices().len();
    if nv > opts.vertex_cap {
        return Outcome::Undecided;
    }
    let mut undecided = false;
    for mask in 1u64..(1u64 << nv) - 1 {
        let keep: Vec<usize> = (0..nv).filter(|&v| mask & (1 << v) != 0).collect();
        if keep.len() <= k {
            continue;
        }
        let sub = g.induced(&keep).expect("subset of valid rows");
        if !has_hard_edge(&sub, gamma, k) {
            continue;
        }
        match forces_outdeg(&sub, gamma, k, threshold, &opts.orient) {
            Ok(true) => return Outcome::Witness(sub.vertices().to_vec()),
            Ok(false) => {}
            Err(_) => undecided = true,
        }
    }
    if undecided {
        Outcome::Undecided
    } else {
        Outcome::None
    }
}

fn combinations(n: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if !rec(n, r, i + 1, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(n, r, 0, &mut Vec::with_capacity(r), f);
}

/// Largest projection length `n <= n_max` admitting a sequence of distinct points and an induced
/// subgraph on which every `k`-list orientation leaves a vertex at the witness threshold.
pub fn koig_dim(h: &HypothesisClass, gamma: Scale, k: usize, opts: &OigDimOptions) -> Result<OigDimResult> {
    h.require_total()?;
    if k == 0 {
        return Err(Error::Precondition("list size k must be at least 1".into()));
    }
    let scale = common_denominator([Ratio64::new(1, h.resolution() as i64), gamma.ratio()]);
    let g = gamma.numer_on(scale)?;
    let fine = h.refine(scale as u32)?;
    let mut result = OigDimResult { dimension: 0, exact_up_to_n_max: true, n_max: opts.n_max, witness: None, undecided: vec![] };
    for n in 1..=opts.n_max.min(h.domain_size()) {
        let threshold = witness_threshold(n, k);
        let mut found: Option<OigWitness> = None;
        let mut undecided = false;
        let mut failure: Option<Error> = None;
        combinations(h.domain_size(), n, &mut |points| {
            let rows = match fine.restrict(points).and_then(|r| r.class.numerators_on(scale)) {
                Ok(r) => r,
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            };
            let graph = OneInclusionGraph::from_rows(&rows).expect("equal-length rows");
            match examine(&graph, g, k, threshold, opts) {
                Outcome::Witness(vertices) => {
                    found = Some(OigWitness { points: points.to_vec(), vertices, scale, threshold });
                    false
                }
                Outcome::None => true,
                Outcome::Undecided => {
                    undecided = true;
                    true
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(w) = found {
            result.dimension = n;
            result.witness = Some(w);
        } else if undecided {
            result.exact_up_to_n_max = false;
            result.undecided.push(n);
        }
    }
    Ok(result)
}
