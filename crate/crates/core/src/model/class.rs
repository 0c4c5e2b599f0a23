//! Finite hypothesis classes stored as matrices of grid numerators.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::grid::{GridValue, Scale};
use crate::error::{Error, Result};

/// One matrix entry: a numerator over the class resolution, or `None` for an undefined label.
pub type Entry = Option<u32>;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    /// Real-valued: every entry is a numerator over the resolution.
    Total,
    /// Multiclass with undefined entries: labels `0..=resolution`.
    Partial,
}

/// Rows are hypotheses, columns are domain points.
///
/// For total classes an entry `p` denotes the label `p / resolution`.
/// For partial classes an entry is a discrete label in `0..=resolution`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisClass {
    domain_size: usize,
    resolution: u32,
    kind: ClassKind,
    rows: Vec<Vec<Entry>>,
}

/// A projected class together with the lowest originating row of every projected row.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub class: HypothesisClass,
    pub points: Vec<usize>,
    pub origin: Vec<usize>,
}

impl HypothesisClass {
    pub fn new(domain_size: usize, resolution: u32, kind: ClassKind, rows: Vec<Vec<Entry>>) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidClass("resolution must be positive".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != domain_size {
                return Err(Error::InvalidClass(format!("row {i} has length {} but the domain has {domain_size} points", row.len())));
            }
            for e in row {
                match e {
                    None if kind == ClassKind::Total => {
                        return Err(Error::InvalidClass(format!("row {i} of a total class contains an undefined entry")))
                    }
                    Some(p) if *p > resolution => {
                        return Err(Error::InvalidClass(format!("row {i} entry {p} exceeds resolution {resolution}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { domain_size, resolution, kind, rows })
    }

    /// Total class from numerator rows.
    pub fn total(domain_size: usize, resolution: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let rows = rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect();
        Self::new(domain_size, resolution, ClassKind::Total, rows)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn entry(&self, row: usize, point: usize) -> Entry {
        self.rows[row][point]
    }

    pub fn value(&self, row: usize, point: usize) -> Option<GridValue> {
        debug_assert_eq!(self.kind, ClassKind::Total);
        self.rows[row][point].map(|p| GridValue::new(p as i64, self.resolution as i64).expect("entry within resolution"))
    }

    pub fn require_total(&self) -> Result<()> {
        match self.kind {
            ClassKind::Total => Ok(()),
            ClassKind::Partial => Err(Error::InvalidClass("operation requires a total class".into())),
        }
    }

    /// Rows as integer numerators over `scale`, which must be a multiple of the resolution.
    pub fn numerators_on(&self, scale: i64) -> Result<Vec<Vec<i64>>> {
        self.require_total()?;
        let q = self.resolution as i64;
        if scale % q != 0 {
            return Err(Error::IncompatibleScale(format!("scale {scale} is not a multiple of resolution {q}")));
        }
        let f = scale / q;
        Ok(self.rows.iter().map(|r| r.iter().map(|e| e.expect("total") as i64 * f).collect()).collect())
    }

    /// Sorted distinct defined entries at `point`.
    pub fn distinct_values(&self, point: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.iter().filter_map(|r| r[point]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of distinct defined entries over the whole matrix.
    pub fn label_count(&self) -> usize {
        let mut v: Vec<u32> = self.rows.iter().flatten().filter_map(|e| *e).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Projects onto `points` and removes duplicate rows, keeping the lowest origin.
    pub fn restrict(&self, points: &[usize]) -> Result<Restriction> {
        if let Some(&bad) = points.iter().find(|&&p| p >= self.domain_size) {
            return Err(Error::UndefinedPoint(bad));
        }
        let mut seen: HashMap<Vec<Entry>, usize> = HashMap::new();
        let mut rows = Vec::new();
        let mut origin = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let projected: Vec<Entry> = points.iter().map(|&p| row[p]).collect();
            if seen.contains_key(&projected) {
                continue;
            }
            seen.insert(projected.clone(), rows.len());
            rows.push(projected);
            origin.push(i);
        }
        let class = HypothesisClass { domain_size: points.len(), resolution: self.resolution, kind: self.kind, rows };
        Ok(Restriction { class, points: points.to_vec(), origin })
    }

    /// Removes duplicate rows.
    pub fn dedup(&self) -> HypothesisClass {
        let all: Vec<usize> = (0..self.domain_size).collect();
        self.restrict(&all).expect("full domain is valid").class
    }

    /// Same class expressed over a finer resolution.
    pub fn refine(&self, resolution: u32) -> Result<HypothesisClass> {
        self.require_total()?;
        if !resolution.is_multiple_of(self.resolution) {
            return Err(Error::IncompatibleScale(format!("{resolution} is not a multiple of {}", self.resolution)));
        }
        let f = resolution / self.resolution;
        let rows = self.rows.iter().map(|r| r.iter().map(|e| e.map(|p| p * f)).collect()).collect();
        Ok(HypothesisClass { domain_size: self.domain_size, resolution, kind: self.kind, rows })
    }

    /// Replaces every entry `x` by `alpha * floor(x / alpha)`, on the grid of `alpha`.
    pub fn discretize(&self, alpha: Scale) -> Result<HypothesisClass> {
        self.require_total()?;
        if alpha.is_zero() {
            return Err(Error::InvalidValue("discretization step must be positive".into()));
        }
        let a = *alpha.ratio().numer();
        let b = *alpha.ratio().denom();
        let q = self.resolution as i64;
        let out_res = u32::try_from(b).map_err(|_| Error::IncompatibleScale(format!("step {alpha} too fine")))?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        e.map(|p| {
                            let steps = (p as i64 * b).div_euclid(q * a);
                            (steps * a) as u32
                        })
                    })
                    .collect()
            })
            .collect();
        HypothesisClass::new(self.domain_size, out_res, ClassKind::Total, rows)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|e| e.map_or(Value::from("*"), Value::from)).collect()))
            .collect();
        serde_json::json!({
            "n": self.domain_size,
            "Q": self.resolution,
            "kind": self.kind,
            "rows": rows,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let file: ClassFile = serde_json::from_value(v.clone())?;
        let mut rows = Vec::with_capacity(file.rows.len());
        for row in file.rows {
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                out.push(match e {
                    Value::String(s) if s == "*" => None,
                    Value::Number(n) => Some(
                        n.as_u64()
                            .and_then(|x| u32::try_from(x).ok())
                            .ok_or_else(|| Error::InvalidClass(format!("entry {n} is not a valid numerator")))?,
                    ),
                    other => return Err(Error::InvalidClass(format!("unexpected entry {other}"))),
                });
            }
            rows.push(out);
        }
        Self::new(file.n, file.q, file.kind, rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())? + "\n")?;
        Ok(())
    }
}

#[derive(Deserialize)]
struct ClassFile {
    n: usize,
    #[serde(rename = "Q")]
    q: u32,
    kind: ClassKind,
    rows: Vec<Vec<Value>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tenths(rows: Vec<Vec<u32>>) -> HypothesisClass {
        let n = rows[0].len();
        HypothesisClass::total(n, 10, rows).unwrap()
    }

    #[test]
    fn restrict_dedupes_keeping_lowest_origin() {
        let h = tenths(vec![vec![1, 2], vec![3, 2], vec![1, 2], vec![1, 5]]);
        let r = h.restrict(&[0]).unwrap();
        assert_eq!(r.class.len(), 2);
        assert_eq!(r.origin, vec![0, 1]);
        assert_eq!(h.dedup().len(), 3);
        assert!(matches!(h.restrict(&[2]), Err(Error::UndefinedPoint(2))));
    }

    #[test]
    fn discretize_floors_to_the_step_grid() {
        let h = HypothesisClass::total(1, 100, vec![vec![37]]).unwrap();
        let d = h.discretize(Scale::new(1, 4).unwrap()).unwrap();
        assert_eq!(d.value(0, 0).unwrap(), GridValue::new(1, 4).unwrap());

        let h = tenths(vec![vec![1, 2, 3]]);
        let d = h.discretize(Scale::new(1, 5).unwrap()).unwrap();
        let vals: Vec<GridValue> = (0..3).map(|c| d.value(0, c).unwrap()).collect();
        let fifth = GridValue::new(1, 5).unwrap();
        assert_eq!(vals, vec![GridValue::zero(), fifth, fifth]);

        let id = h.discretize(Scale::new(1, 10).unwrap()).unwrap();
        assert_eq!(id, h);
        assert!(h.discretize(Scale::zero()).is_err());
    }

    #[test]
    fn json_round_trip_with_undefined_entries() {
        let h = HypothesisClass::new(2, 2, ClassKind::Partial, vec![vec![Some(0), None], vec![Some(2), Some(1)]]).unwrap();
        let back = HypothesisClass::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
        let bad = serde_json::json!({"n": 1, "Q": 2, "kind": "total", "rows": [["*"]]});
        assert!(HypothesisClass::from_json(&bad).is_err());
    }

    #[test]
    fn rejects_ragged_rows_and_large_numerators() {
        assert!(HypothesisClass::total(2, 10, vec![vec![1]]).is_err());
        assert!(HypothesisClass::total(1, 10, vec![vec![11]]).is_err());
    }
}
