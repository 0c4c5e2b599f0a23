//! Fat-shattering, strong-fat-shattering and `k`-Natarajan dimensions.

use serde_json::Value;

use super::engine::{maximal_maps, search, BucketMap, Found, SearchColumn, SearchLimits, UNASSIGNED, UNDEFINED};
use super::SearchCaps;
use crate::model::grid::{common_denominator, Ratio64};
use crate::model::{ClassKind, HypothesisClass, Scale};
use crate::error::{Error, Result};

/// A shattered sequence with per-point anchors and a realizing row for every pattern.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShatterWitness {
    pub points: Vec<usize>,
    /// Per point: `k` anchors (fat), `k+1` anchor values (strong) or `k+1` labels (Natarajan).
    pub anchors: Vec<Vec<Ratio64>>,
    /// Pattern over `0..=k` per point, and the index of a row of the input class realizing it.
    pub assignment: Vec<(Vec<u8>, usize)>,
}

impl ShatterWitness {
    pub fn to_json(&self) -> Value {
        let anchors: Vec<Vec<String>> = self.anchors.iter().map(|a| a.iter().map(|r| r.to_string()).collect()).collect();
        let assignment: Vec<Value> = self.assignment.iter().map(|(p, r)| serde_json::json!({"pattern": p, "row": r})).collect();
        serde_json::json!({ "points": self.points, "anchors": anchors, "assignment": assignment })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionResult {
    pub dimension: usize,
    pub witness: ShatterWitness,
}

struct Prepared {
    rows: Vec<usize>,
    scale: i64,
    columns: Vec<SearchColumn>,
}

fn check_caps(h: &HypothesisClass, k: usize, caps: &SearchCaps) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("list size k must be at least 1".into()));
    }
    if h.len() > caps.max_rows || h.domain_size() > caps.max_points || k > caps.max_k {
        return Err(Error::ExceedsDeskScale(format!(
            "class with {} rows on {} points and k = {k} exceeds caps ({} rows, {} points, k <= {})",
            h.len(),
            h.domain_size(),
            caps.max_rows,
            caps.max_points,
            caps.max_k
        )));
    }
    Ok(())
}

/// Distinct rows (lowest original index) and per-point value tables on `scale`.
fn prepare(
    h: &HypothesisClass,
    scale: i64,
    maps_for: impl Fn(&[i64]) -> Vec<BucketMap>,
) -> Result<Prepared> {
    let dedup = h.restrict(&(0..h.domain_size()).collect::<Vec<_>>())?;
    let factor = if h.kind() == ClassKind::Total { scale / h.resolution() as i64 } else { 1 };
    let mut columns = Vec::with_capacity(h.domain_size());
    for x in 0..h.domain_size() {
        let values: Vec<i64> = dedup.class.distinct_values(x).into_iter().map(|v| v as i64 * factor).collect();
        if values.len() >= UNDEFINED as usize {
            return Err(Error::ExceedsDeskScale(format!("point {x} has too many distinct values")));
        }
        let row_values = dedup
            .class
            .rows()
            .iter()
            .map(|r| match r[x] {
                None => UNDEFINED,
                Some(v) => values.binary_search(&(v as i64 * factor)).expect("value present") as u16,
            })
            .collect();
        columns.push(SearchColumn { point: x, row_values, maps: maps_for(&values) });
    }
    Ok(Prepared { rows: dedup.origin, scale, columns })
}

fn finish(prep: &Prepared, found: Option<Found>) -> DimensionResult {
    match found {
        // The empty sequence has one pattern, realized by any row.
        None => DimensionResult {
            dimension: 0,
            witness: ShatterWitness {
                assignment: prep.rows.first().map(|&r| (Vec::new(), r)).into_iter().collect(),
                ..ShatterWitness::default()
            },
        },
        Some(f) => {
            let anchors = f
                .columns
                .iter()
                .zip(&f.maps)
                .map(|(&x, &m)| {
                    prep.columns[x].maps[m].anchors.iter().map(|&a| Ratio64::new(a, prep.scale)).collect()
                })
                .collect();
            let assignment = f.assignment.into_iter().map(|(p, r)| (p, prep.rows[r])).collect();
            DimensionResult { dimension: f.columns.len(), witness: ShatterWitness { points: f.columns, anchors, assignment } }
        }
    }
}

fn limits(caps: &SearchCaps) -> SearchLimits {
    SearchLimits { max_d: caps.max_d.unwrap_or(usize::MAX), node_budget: caps.node_budget }
}

fn margin_scale(h: &HypothesisClass, gamma: Scale) -> Result<(i64, i64)> {
    h.require_total()?;
    if gamma.is_zero() {
        return Err(Error::Precondition("margin must be positive".into()));
    }
    let scale = common_denominator([Ratio64::new(1, h.resolution() as i64), gamma.ratio()]);
    Ok((scale, gamma.numer_on(scale)?))
}

/// Bucket maps induced by anchor tuples `c_1 < ... < c_k` with gaps of at least `2g`,
/// where `c_j` ranges over `v + g` for observed values `v`. These canonical anchors
/// realize every maximal admissible map.
fn fat_maps(values: &[i64], g: i64, k: usize, top: i64) -> Vec<BucketMap> {
    let cands: Vec<i64> = values.iter().map(|v| v + g).filter(|&c| c <= top).collect();
    let mut maps = Vec::new();
    let mut tuple = Vec::with_capacity(k);
    fn rec(cands: &[i64], start: usize, g: i64, k: usize, values: &[i64], tuple: &mut Vec<i64>, out: &mut Vec<BucketMap>) {
        if tuple.len() == k {
            let buckets: Vec<u8> = values
                .iter()
                .map(|&v| {
                    if v <= tuple[0] - g {
                        return 0;
                    }
                    if v >= tuple[k - 1] + g {
                        return k as u8;
                    }
                    (1..k).find(|&j| v >= tuple[j - 1] + g && v <= tuple[j] - g).map_or(UNASSIGNED, |j| j as u8)
                })
                .collect();
            let all_present = (0..=k as u8).all(|b| buckets.contains(&b));
            if all_present {
                out.push(BucketMap { buckets, anchors: tuple.clone() });
            }
            return;
        }
        for i in start..cands.len() {
            if let Some(&last) = tuple.last() {
                if cands[i] < last + 2 * g {
                    continue;
                }
            }
            tuple.push(cands[i]);
            rec(cands, i + 1, g, k, values, tuple, out);
            tuple.pop();
        }
    }
    rec(&cands, 0, g, k, values, &mut tuple, &mut maps);
    maximal_maps(maps)
}

/// `(k+1)`-subsets of observed values whose consecutive gaps are at least `2g`.
fn strong_maps(values: &[i64], g: i64, k: usize) -> Vec<BucketMap> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k + 1);
    fn rec(values: &[i64], start: usize, g: i64, k: usize, pick: &mut Vec<usize>, out: &mut Vec<BucketMap>) {
        if pick.len() == k + 1 {
            let mut buckets = vec![UNASSIGNED; values.len()];
            for (b, &i) in pick.iter().enumerate() {
                buckets[i] = b as u8;
            }
            out.push(BucketMap { buckets, anchors: pick.iter().map(|&i| values[i]).collect() });
            return;
        }
        for i in start..values.len() {
            if let Some(&last) = pick.last() {
                if values[i] - values[last] < 2 * g {
                    continue;
                }
            }
            pick.push(i);
            rec(values, i + 1, g, k, pick, out);
            pick.pop();
        }
    }
    rec(values, 0, g, k, &mut pick, &mut out);
    out
}

/// Largest `(gamma, k)`-fat-shattered sequence.
pub fn fat_dim(h: &HypothesisClass, gamma: Scale, k: usize) -> Result<DimensionResult> {
    fat_dim_with(h, gamma, k, &SearchCaps::default())
}

pub fn fat_dim_with(h: &HypothesisClass, gamma: Scale, k: usize, caps: &SearchCaps) -> Result<DimensionResult> {
    check_caps(h, k, caps)?;
    let (scale, g) = margin_scale(h, gamma)?;
    let prep = prepare(h, scale, |vals| fat_maps(vals, g, k, scale))?;
    let (_, found) = search(&prep.columns, prep.rows.len(), k, &limits(caps))?;
    Ok(finish(&prep, found))
}

/// Largest `(gamma, k)`-strongly-fat-shattered sequence (exact equality to anchor values).
pub fn strong_fat_dim(h: &HypothesisClass, gamma: Scale, k: usize) -> Result<DimensionResult> {
    strong_fat_dim_with(h, gamma, k, &SearchCaps::default())
}

pub fn strong_fat_dim_with(h: &HypothesisClass, gamma: Scale, k: usize, caps: &SearchCaps) -> Result<DimensionResult> {
    check_caps(h, k, caps)?;
    let (scale, g) = margin_scale(h, gamma)?;
    let prep = prepare(h, scale, |vals| strong_maps(vals, g, k))?;
    let (_, found) = search(&prep.columns, prep.rows.len(), k, &limits(caps))?;
    Ok(finish(&prep, found))
}

/// Largest sequence on which a partial multiclass class contains a product of `(k+1)`-label sets.
pub fn k_natarajan_dim(h: &HypothesisClass, k: usize) -> Result<DimensionResult> {
    k_natarajan_dim_with(h, k, &SearchCaps::default())
}

pub fn k_natarajan_dim_with(h: &HypothesisClass, k: usize, caps: &SearchCaps) -> Result<DimensionResult> {
    check_caps(h, k, caps)?;
    if h.kind() != ClassKind::Partial {
        return Err(Error::InvalidClass("k-Natarajan dimension expects a partial multiclass class".into()));
    }
    // Any k+1 distinct labels form an admissible set: the zero-gap case of the strong maps.
    let prep = prepare(h, 1, |vals| strong_maps(vals, 0, k))?;
    let (_, found) = search(&prep.columns, prep.rows.len(), k, &limits(caps))?;
    Ok(finish(&prep, found))
}

fn check_patterns(w: &ShatterWitness, k: usize, rows: usize) -> Result<()> {
    let d = w.points.len();
    let base = k + 1;
    let total = base.pow(d as u32);
    if w.anchors.len() != d {
        return Err(Error::Precondition("one anchor vector per point required".into()));
    }
    let mut seen = vec![false; total];
    for (pat, row) in &w.assignment {
        if pat.len() != d || pat.iter().any(|&b| b as usize > k) || *row >= rows {
            return Err(Error::Precondition(format!("malformed assignment entry {pat:?} -> {row}")));
        }
        let code = pat.iter().fold(0usize, |acc, &b| acc * base + b as usize);
        seen[code] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Precondition("some pattern has no realizing row".into()));
    }
    Ok(())
}

/// Replays the fat-shattering definition on a witness.
pub fn verify_fat_witness(h: &HypothesisClass, gamma: Scale, k: usize, w: &ShatterWitness) -> Result<()> {
    check_patterns(w, k, h.len())?;
    let g = gamma.ratio();
    let zero = Ratio64::from_integer(0);
    let one = Ratio64::from_integer(1);
    for c in &w.anchors {
        if c.len() != k || c.iter().any(|a| *a < zero || *a > one) {
            return Err(Error::Precondition(format!("anchors {c:?} must be k values in [0,1]")));
        }
        if c.windows(2).any(|p| p[1] < p[0] + g * 2) {
            return Err(Error::Precondition(format!("anchors {c:?} are closer than 2*gamma")));
        }
    }
    for (pat, row) in &w.assignment {
        for (i, &b) in pat.iter().enumerate() {
            let v = h.value(*row, w.points[i]).ok_or(Error::InvalidClass("undefined entry".into()))?.ratio();
            let c = &w.anchors[i];
            let b = b as usize;
            let ok = if b == 0 {
                v <= c[0] - g
            } else if b == k {
                v >= c[k - 1] + g
            } else {
                v >= c[b - 1] + g && v <= c[b] - g
            };
            if !ok {
                return Err(Error::Precondition(format!("row {row} misses bucket {b} at point {}", w.points[i])));
            }
        }
    }
    Ok(())
}

/// Replays the strong-fat-shattering definition on a witness.
pub fn verify_strong_witness(h: &HypothesisClass, gamma: Scale, k: usize, w: &ShatterWitness) -> Result<()> {
    check_patterns(w, k, h.len())?;
    let g = gamma.ratio();
    for c in &w.anchors {
        if c.len() != k + 1 || c.windows(2).any(|p| p[1] < p[0] + g * 2) {
            return Err(Error::Precondition(format!("anchor values {c:?} are not 2*gamma separated")));
        }
    }
    for (pat, row) in &w.assignment {
        for (i, &b) in pat.iter().enumerate() {
            let v = h.value(*row, w.points[i]).ok_or(Error::InvalidClass("undefined entry".into()))?.ratio();
            if v != w.anchors[i][b as usize] {
                return Err(Error::Precondition(format!("row {row} does not hit anchor {b} at point {}", w.points[i])));
            }
        }
    }
    Ok(())
}

/// Replays the `k`-Natarajan definition on a witness.
pub fn verify_natarajan_witness(h: &HypothesisClass, k: usize, w: &ShatterWitness) -> Result<()> {
    check_patterns(w, k, h.len())?;
    for c in &w.anchors {
        let mut sorted = c.clone();
        sorted.dedup();
        if c.len() != k + 1 || sorted.len() != k + 1 {
            return Err(Error::Precondition(format!("label set {c:?} must have k+1 distinct labels")));
        }
    }
    for (pat, row) in &w.assignment {
        for (i, &b) in pat.iter().enumerate() {
            let label = h.entry(*row, w.points[i]).ok_or(Error::Precondition("undefined label".into()))?;
            if Ratio64::from_integer(label as i64) != w.anchors[i][b as usize] {
                return Err(Error::Precondition(format!("row {row} misses label slot {b} at point {}", w.points[i])));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64) -> Scale {
        Scale::new(p, q).unwrap()
    }

    #[test]
    fn singleton_class_has_dimension_zero() {
        let h = HypothesisClass::total(3, 10, vec![vec![1, 5, 9]]).unwrap();
        assert_eq!(fat_dim(&h, g(1, 20), 1).unwrap().dimension, 0);
        assert_eq!(strong_fat_dim(&h, g(1, 20), 1).unwrap().dimension, 0);
    }

    #[test]
    fn three_separated_constants_on_one_point() {
        // Values 0, 2γ, 4γ with γ = 1/8.
        let h = HypothesisClass::total(1, 4, vec![vec![0], vec![1], vec![2]]).unwrap();
        let r = strong_fat_dim(&h, g(1, 8), 2).unwrap();
        assert_eq!(r.dimension, 1);
        verify_strong_witness(&h, g(1, 8), 2, &r.witness).unwrap();
        // Fat margins need strict room around two anchors: 0 <= c1 - γ, c1 + γ <= 1/4 <= c2 - γ.
        let f = fat_dim(&h, g(1, 8), 2).unwrap();
        assert_eq!(f.dimension, 1);
        verify_fat_witness(&h, g(1, 8), 2, &f.witness).unwrap();
    }

    #[test]
    fn natarajan_on_full_ternary_point() {
        let h = HypothesisClass::new(1, 2, ClassKind::Partial, vec![vec![Some(0)], vec![Some(1)], vec![Some(2)]]).unwrap();
        let r = k_natarajan_dim(&h, 2).unwrap();
        assert_eq!(r.dimension, 1);
        verify_natarajan_witness(&h, 2, &r.witness).unwrap();
        let few = HypothesisClass::new(2, 2, ClassKind::Partial, vec![vec![Some(0), None], vec![Some(1), Some(2)]]).unwrap();
        assert_eq!(k_natarajan_dim(&few, 2).unwrap().dimension, 0);
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let h = HypothesisClass::total(1, 10, vec![vec![1], vec![9]]).unwrap();
        let mut r = fat_dim(&h, g(1, 10), 1).unwrap();
        assert_eq!(r.dimension, 1);
        verify_fat_witness(&h, g(1, 10), 1, &r.witness).unwrap();
        r.witness.assignment[0].1 = 1;
        assert!(verify_fat_witness(&h, g(1, 10), 1, &r.witness).is_err());
    }

    #[test]
    fn zero_margin_is_rejected() {
        let h = HypothesisClass::total(1, 10, vec![vec![1], vec![9]]).unwrap();
        assert!(fat_dim(&h, Scale::zero(), 1).is_err());
    }
}
