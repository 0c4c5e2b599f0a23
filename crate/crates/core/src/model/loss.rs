//! List losses, samples and list hypotheses.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use super::class::HypothesisClass;
use super::distribution::FiniteDistribution;
use super::grid::{parse_ratio, to_exact, Exact, GridValue, Ratio64, Scale};
use crate::error::{Error, Result};

/// Sorted, duplicate-free list of candidate labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelList(Vec<GridValue>);

impl LabelList {
    pub fn new(mut values: Vec<GridValue>) -> Self {
        values.sort();
        values.dedup();
        LabelList(values)
    }

    pub fn single(v: GridValue) -> Self {
        LabelList(vec![v])
    }

    pub fn values(&self) -> &[GridValue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|v| Value::from(v.to_string())).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("label list must be an array".into()))?;
        let mut out = Vec::with_capacity(arr.len());
        for e in arr {
            let s = match e {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("bad label {other}"))),
            };
            out.push(GridValue::from_ratio(parse_ratio(&s)?)?);
        }
        Ok(LabelList::new(out))
    }
}

/// `min_j |mu_j - y|`.
pub fn abs_list_loss(mu: &LabelList, y: GridValue) -> Result<Ratio64> {
    mu.0.iter().map(|v| v.abs_diff(y)).min().ok_or(Error::EmptyPrediction)
}

/// Whether some element of `mu` lies within `gamma` of `y`.
pub fn gamma_contains(mu: &LabelList, y: GridValue, gamma: Scale) -> bool {
    abs_list_loss(mu, y).is_ok_and(|l| l <= gamma.ratio())
}

/// Labelled examples `(point, label)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LabeledSample {
    pub pairs: Vec<(usize, GridValue)>,
}

impl LabeledSample {
    pub fn new(pairs: Vec<(usize, GridValue)>) -> Self {
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Rows of a total class agreeing with every example.
    pub fn consistent_rows(&self, class: &HypothesisClass) -> Vec<usize> {
        (0..class.len())
            .filter(|&r| self.pairs.iter().all(|&(x, y)| x < class.domain_size() && class.value(r, x) == Some(y)))
            .collect()
    }

    pub fn is_realizable_by(&self, class: &HypothesisClass) -> bool {
        class.kind() == super::class::ClassKind::Total && !self.consistent_rows(class).is_empty()
    }

    pub fn check_domain(&self, domain_size: usize) -> Result<()> {
        match self.pairs.iter().find(|p| p.0 >= domain_size) {
            Some(&(x, _)) => Err(Error::UndefinedPoint(x)),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self.pairs.iter().map(|(x, y)| serde_json::json!([x, y.to_string()])).collect();
        serde_json::json!({ "pairs": pairs })
    }

    /// Accepts `{"pairs": [[x, "p/q"], ...]}`; numeric labels are read over `"Q"` when present.
    pub fn from_json(v: &Value) -> Result<Self> {
        let q = v.get("Q").and_then(Value::as_i64);
        let arr = v
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("sample needs a \"pairs\" array".into()))?;
        let mut pairs = Vec::with_capacity(arr.len());
        for p in arr {
            let x = p.get(0).and_then(Value::as_u64).ok_or_else(|| Error::Parse(format!("bad pair {p}")))? as usize;
            let y = match (p.get(1), q) {
                (Some(Value::String(s)), _) => s.parse::<GridValue>()?,
                (Some(Value::Number(n)), Some(q)) => GridValue::new(n.as_i64().unwrap_or(-1), q)?,
                (Some(Value::Number(n)), None) => n.to_string().parse::<GridValue>()?,
                _ => return Err(Error::Parse(format!("bad pair {p}"))),
            };
            pairs.push((x, y));
        }
        Ok(Self { pairs })
    }
}

/// Anything that maps domain points to label lists.
pub trait ListPredictor {
    fn predict(&self, x: usize) -> Result<LabelList>;
}

impl<F: Fn(usize) -> Option<LabelList>> ListPredictor for F {
    fn predict(&self, x: usize) -> Result<LabelList> {
        self(x).ok_or(Error::UndefinedPoint(x))
    }
}

/// A list hypothesis materialized on every point of a finite domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListHypothesis {
    pub predictions: Vec<LabelList>,
}

impl ListPredictor for ListHypothesis {
    fn predict(&self, x: usize) -> Result<LabelList> {
        self.predictions.get(x).cloned().ok_or(Error::UndefinedPoint(x))
    }
}

impl ListHypothesis {
    pub fn max_list_len(&self) -> usize {
        self.predictions.iter().map(LabelList::len).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let preds: Vec<Value> = self.predictions.iter().map(LabelList::to_json).collect();
        serde_json::json!({ "n": self.predictions.len(), "predictions": preds })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("predictions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("hypothesis needs a \"predictions\" array".into()))?;
        Ok(Self { predictions: arr.iter().map(LabelList::from_json).collect::<Result<_>>()? })
    }
}

/// Average list loss over the sample; zero on an empty sample.
pub fn empirical_error(predictor: &dyn ListPredictor, sample: &LabeledSample) -> Result<Exact> {
    if sample.is_empty() {
        return Ok(Exact::zero());
    }
    let mut total = Exact::zero();
    for &(x, y) in &sample.pairs {
        total += to_exact(abs_list_loss(&predictor.predict(x)?, y)?);
    }
    Ok(total / Exact::from_integer(BigInt::from(sample.len())))
}

/// Mass-weighted list loss.
pub fn population_error(predictor: &dyn ListPredictor, dist: &FiniteDistribution) -> Result<Exact> {
    let mut total = Exact::zero();
    for atom in dist.support() {
        total += to_exact(abs_list_loss(&predictor.predict(atom.point)?, atom.label)?) * &atom.mass;
    }
    Ok(total)
}
