//! Sample-compression accounting for pipeline runs and the compression generalization bound.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::learner::PipelineRecord;

/// Size of the compression a pipeline run induces on a training sample of `sample_size` examples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressionRecord {
    /// Recorded examples per subsequence, with multiplicity.
    pub subsequence_sizes: Vec<usize>,
    pub examples: usize,
    pub side_bits: u64,
    /// `examples + side_bits`.
    pub size: u64,
    pub sample_size: usize,
    /// Set when `size > sample_size / 2`, where the bound does not apply.
    pub exceeds_half: bool,
}

impl CompressionRecord {
    pub fn to_json(&self, bound: Option<f64>) -> Value {
        json!({
            "examples": self.examples,
            "side_bits": self.side_bits,
            "size": self.size,
            "sample_size": self.sample_size,
            "exceeds_half": self.exceeds_half,
            "bound": bound.map(|b| format!("{b:.12}")),
        })
    }
}

/// Counts what the record keeps: every recorded example, plus `k * ceil(log2(1/gamma))` bits per
/// recorded threshold for the threshold pipeline.
pub fn account(record: &PipelineRecord, sample_size: usize) -> CompressionRecord {
    let subsequence_sizes: Vec<usize> = match record {
        PipelineRecord::Threshold { subsequences, .. } => subsequences.iter().map(Vec::len).collect(),
        PipelineRecord::Quantile { subsequences, .. } => subsequences.iter().map(Vec::len).collect(),
    };
    let examples = record.example_count();
    let side_bits = record.side_bits();
    let size = examples as u64 + side_bits;
    CompressionRecord { subsequence_sizes, examples, side_bits, size, sample_size, exceeds_half: 2 * size > sample_size as u64 }
}

/// Confidence parameter strictly inside `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Confidence(f64);

impl Confidence {
    pub fn new(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta < 1.0 {
            Ok(Self(delta))
        } else {
            Err(Error::Precondition(format!("confidence must lie in (0, 1), got {delta}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `e + c * sqrt(e_off * t / n) + c * t / n` with `t = size * ln n + ln(1/delta)`.
///
/// `e` is the empirical error on the whole sample and `e_off` the error off the compression set.
/// Errors when `size > n / 2`.
pub fn generalization_bound(n: usize, size: u64, delta: Confidence, emp_err: f64, emp_err_off: f64, constant: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("the bound needs a nonempty sample".into()));
    }
    if 2 * size > n as u64 {
        return Err(Error::Precondition(format!("compression size {size} exceeds half the sample size {n}")));
    }
    for (name, v) in [("empirical error", emp_err), ("off-compression error", emp_err_off)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Precondition(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::Precondition(format!("bound constant must be positive, got {constant}")));
    }
    let n_f = n as f64;
    let t = size as f64 * n_f.ln() + (1.0 / delta.get()).ln();
    Ok(emp_err + constant * (emp_err_off * t / n_f).sqrt() + constant * t / n_f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::ThresholdExample;
    use crate::model::{GridValue, Scale};
    use num_rational::Ratio;

    fn threshold_record(m: usize, l: usize, k: usize, gamma: Scale) -> PipelineRecord {
        let e = ThresholdExample { x: 0, y: GridValue::new(0, 1).unwrap(), tau: 0 };
        PipelineRecord::Threshold { gamma, k, radius: Ratio::new(1, 1), subsequences: vec![vec![e; m]; l] }
    }

    #[test]
    fn threshold_size_counts_examples_and_side_bits() {
        let c = account(&threshold_record(2, 3, 1, Scale::new(1, 4).unwrap()), 100);
        assert_eq!((c.examples, c.side_bits, c.size), (6, 12, 18));
        assert!(!c.exceeds_half);
    }

    #[test]
    fn quantile_records_carry_no_side_bits() {
        let y = GridValue::new(1, 2).unwrap();
        let r = PipelineRecord::Quantile { gamma: Scale::new(1, 4).unwrap(), k: 2, subsequences: vec![vec![(0, y); 3]; 4] };
        let c = account(&r, 10);
        assert_eq!((c.examples, c.side_bits, c.size), (12, 0, 12));
        assert!(c.exceeds_half);
    }

    #[test]
    fn empty_record_has_size_zero() {
        assert_eq!(account(&threshold_record(0, 0, 2, Scale::new(1, 8).unwrap()), 0).size, 0);
    }

    #[test]
    fn bound_with_zero_errors_is_the_additive_term() {
        let b = generalization_bound(10, 0, Confidence::new(0.5).unwrap(), 0.0, 0.0, 1.0).unwrap();
        assert!((b - 2f64.ln() / 10.0).abs() < 1e-15);
    }

    #[test]
    fn bound_matches_hand_formula() {
        let t = 50.0 * 1000f64.ln() + 20f64.ln();
        let hand = 0.1 + (0.1 * t / 1000.0).sqrt() + t / 1000.0;
        let b = generalization_bound(1000, 50, Confidence::new(0.05).unwrap(), 0.1, 0.1, 1.0).unwrap();
        assert!((b - hand).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_oversized_compressions() {
        assert!(generalization_bound(10, 6, Confidence::new(0.1).unwrap(), 0.0, 0.0, 1.0).is_err());
        assert!(Confidence::new(1.0).is_err());
    }
}
