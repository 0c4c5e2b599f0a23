//! `k`-thresholds over the `gamma`-grid, the threshold operator and the threshold class.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::grid::{binomial, lcm, to_exact, Ratio64};
use crate::model::{ClassKind, GridValue, HypothesisClass, Scale};

/// Upper limit on the number of enumerated `k`-thresholds.
const MAX_THRESHOLDS: usize = 1_000_000;
/// Upper limit on matrix entries of a materialized threshold class.
const MAX_CLASS_ENTRIES: usize = 40_000_000;

/// Strictly increasing components drawn from `{0, gamma, ..., gamma*floor(1/gamma)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KThreshold(Vec<Ratio64>);

impl KThreshold {
    /// Validates strict increase and membership in the `gamma`-grid.
    pub fn new(components: Vec<Ratio64>, gamma: Scale) -> Result<Self> {
        if gamma.is_zero() || gamma.ratio() >= Ratio64::one() {
            return Err(Error::InvalidValue(format!("threshold step {gamma} must lie in (0,1)")));
        }
        for (i, c) in components.iter().enumerate() {
            let steps = c / gamma.ratio();
            if !steps.is_integer() || *c < Ratio64::from_integer(0) || *c > Ratio64::one() {
                return Err(Error::InvalidValue(format!("component {c} is not on the grid of step {gamma}")));
            }
            if i > 0 && components[i - 1] >= *c {
                return Err(Error::InvalidValue("threshold components must be strictly increasing".into()));
            }
        }
        Ok(KThreshold(components))
    }

    pub fn components(&self) -> &[Ratio64] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

/// `Thr_tau(y)`: the bucket of `y` among the components, or `None` inside an open `gamma/2` band.
pub fn thr_operator(y: GridValue, tau: &KThreshold, gamma: Scale) -> Option<u32> {
    let half = gamma.ratio() / 2;
    let y = y.ratio();
    let mut above = 0;
    for &t in tau.components() {
        if y > t - half && y < t + half {
            return None;
        }
        if y >= t + half {
            above += 1;
        }
    }
    Some(above)
}

/// `f(a, tau) = |{i : a > tau_i}|`.
pub fn classifier_f(a: Ratio64, tau: &KThreshold) -> u32 {
    tau.components().iter().filter(|&&t| a > t).count() as u32
}

/// The ordered set of all `k`-thresholds for a step `gamma`.
#[derive(Clone, Debug)]
pub struct ThresholdGrid {
    gamma: Scale,
    k: usize,
    steps: usize,
    taus: Vec<KThreshold>,
    /// Grid indices of every threshold's components.
    indices: Vec<Vec<u32>>,
}

impl ThresholdGrid {
    /// Enumerates thresholds in lexicographic order of their components.
    pub fn new(gamma: Scale, k: usize) -> Result<Self> {
        if gamma.is_zero() || gamma.ratio() >= Ratio64::one() {
            return Err(Error::InvalidValue(format!("threshold step {gamma} must lie in (0,1)")));
        }
        if k == 0 {
            return Err(Error::Precondition("list size k must be at least 1".into()));
        }
        let steps = (Ratio64::one() / gamma.ratio()).floor().to_integer() as usize;
        if k > steps + 1 {
            return Err(Error::Precondition(format!("no strictly increasing {k}-vector over {} grid values", steps + 1)));
        }
        let count = binomial(steps as u64 + 1, k as u64).to_usize().unwrap_or(usize::MAX);
        if count > MAX_THRESHOLDS {
            return Err(Error::ExceedsDeskScale(format!("{count} thresholds")));
        }
        let mut indices = Vec::with_capacity(count);
        let mut cur: Vec<u32> = (0..k as u32).collect();
        loop {
            indices.push(cur.clone());
            // Advance to the next combination of `k` indices from `0..=steps`.
            let mut i = k;
            while i > 0 && cur[i - 1] as usize == steps + 1 - (k - i + 1) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
        let g = gamma.ratio();
        let taus = indices
            .iter()
            .map(|ix| KThreshold(ix.iter().map(|&i| g * Ratio64::from_integer(i as i64)).collect()))
            .collect();
        Ok(Self { gamma, k, steps, taus, indices })
    }

    pub fn gamma(&self) -> Scale {
        self.gamma
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `floor(1/gamma)`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn taus(&self) -> &[KThreshold] {
        &self.taus
    }

    pub fn tau(&self, index: usize) -> &KThreshold {
        &self.taus[index]
    }

    pub fn index_of(&self, tau: &KThreshold) -> Option<usize> {
        self.taus.binary_search(tau).ok()
    }

    /// `C(floor(1/gamma), k-1)`.
    pub fn normaliser(&self) -> BigInt {
        binomial(self.steps as u64, self.k as u64 - 1)
    }

    /// Integer form on a scale that represents labels over `resolution`, the grid and `gamma/2`.
    pub(crate) fn integer_view(&self, resolution: u32) -> IntegerThresholds {
        let g = self.gamma.ratio();
        let scale = lcm(resolution as i64, *(g / 2).denom());
        let step = (g * Ratio64::from_integer(scale)).to_integer();
        let half = (g / 2 * Ratio64::from_integer(scale)).to_integer();
        let taus = self.indices.iter().map(|ix| ix.iter().map(|&i| i as i64 * step).collect()).collect();
        IntegerThresholds { label_factor: scale / resolution as i64, half, taus }
    }
}

/// Thresholds as integers over a common scale.
#[derive(Clone, Debug)]
pub(crate) struct IntegerThresholds {
    /// Multiplier taking a label numerator over the class resolution to this scale.
    pub label_factor: i64,
    pub half: i64,
    pub taus: Vec<Vec<i64>>,
}

impl IntegerThresholds {
    pub fn thr(&self, y: i64, tau: usize) -> Option<u32> {
        let mut above = 0;
        for &t in &self.taus[tau] {
            if y > t - self.half && y < t + self.half {
                return None;
            }
            if y >= t + self.half {
                above += 1;
            }
        }
        Some(above)
    }
}

/// `min(1, gamma * sum / C(floor(1/gamma), k-1))` for one value per threshold in grid order.
pub fn scaled_sum(grid: &ThresholdGrid, values: &[u32]) -> Result<GridValue> {
    if values.len() != grid.len() {
        return Err(Error::Precondition(format!("{} values supplied for {} thresholds", values.len(), grid.len())));
    }
    let total: u64 = values.iter().map(|&v| v as u64).sum();
    scaled_total(grid, total)
}

/// Scaled sum for an already accumulated total.
pub(crate) fn scaled_total(grid: &ThresholdGrid, total: u64) -> Result<GridValue> {
    let value = to_exact(grid.gamma.ratio()) * BigRational::from_integer(BigInt::from(total))
        / BigRational::from_integer(grid.normaliser());
    let clipped = if value > BigRational::one() { BigRational::one() } else { value };
    let n = clipped.numer().to_i64();
    let d = clipped.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => GridValue::new(n, d),
        _ => Err(Error::ExceedsDeskScale("scaled sum denominator overflows".into())),
    }
}

/// Grid indices of the thresholds whose components all lie at least `gamma/2` from `a`.
pub fn separated_set(a: Ratio64, grid: &ThresholdGrid) -> Vec<usize> {
    let half = grid.gamma.ratio() / 2;
    (0..grid.len())
        .filter(|&t| grid.tau(t).components().iter().all(|&c| (c - a).abs() >= half))
        .collect()
}

/// Partial class over `point x` and `threshold t`, flattened as `x * |thresholds| + t`.
#[derive(Clone, Debug)]
pub struct ThresholdClass {
    pub grid: ThresholdGrid,
    pub base_domain: usize,
    pub class: HypothesisClass,
}

impl ThresholdClass {
    pub fn point(&self, x: usize, tau: usize) -> usize {
        x * self.grid.len() + tau
    }

    pub fn split(&self, point: usize) -> (usize, usize) {
        (point / self.grid.len(), point % self.grid.len())
    }
}

/// Builds the threshold class of a total class: entry `(h, (x, tau)) = Thr_tau(h(x))`.
pub fn build_threshold_class(h: &HypothesisClass, gamma: Scale, k: usize) -> Result<ThresholdClass> {
    h.require_total()?;
    let grid = ThresholdGrid::new(gamma, k)?;
    let width = h.domain_size() * grid.len();
    if width.saturating_mul(h.len()) > MAX_CLASS_ENTRIES {
        return Err(Error::ExceedsDeskScale(format!("threshold class with {} rows over {width} points", h.len())));
    }
    let int = grid.integer_view(h.resolution());
    let rows = h
        .rows()
        .iter()
        .map(|row| {
            let mut out = Vec::with_capacity(width);
            for e in row {
                let y = e.expect("total class") as i64 * int.label_factor;
                out.extend((0..grid.len()).map(|t| int.thr(y, t)));
            }
            out
        })
        .collect();
    let class = HypothesisClass::new(width, k as u32, ClassKind::Partial, rows)?;
    Ok(ThresholdClass { grid, base_domain: h.domain_size(), class })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Ratio64 {
        Ratio64::new(p, q)
    }

    fn g(p: i64, q: i64) -> GridValue {
        GridValue::new(p, q).unwrap()
    }

    fn s(p: i64, q: i64) -> Scale {
        Scale::new(p, q).unwrap()
    }

    #[test]
    fn operator_cases() {
        let gamma = s(1, 5);
        let tau = KThreshold::new(vec![r(2, 5), r(4, 5)], gamma).unwrap();
        assert_eq!(thr_operator(g(1, 10), &tau, gamma), Some(0));
        assert_eq!(thr_operator(g(1, 2), &tau, gamma), Some(1));
        assert_eq!(thr_operator(g(19, 20), &tau, gamma), Some(2));
        assert_eq!(thr_operator(g(7, 20), &tau, gamma), None);
        assert_eq!(thr_operator(g(3, 10), &tau, gamma), Some(0));
        let single = KThreshold::new(vec![r(3, 5)], gamma).unwrap();
        assert_eq!(thr_operator(g(13, 20), &single, gamma), None);
        assert_eq!(thr_operator(g(7, 10), &single, gamma), Some(1));
    }

    #[test]
    fn classifier_counts_strictly_smaller_components() {
        let gamma = s(1, 4);
        let tau = KThreshold::new(vec![r(1, 4), r(3, 4)], gamma).unwrap();
        assert_eq!(classifier_f(r(1, 2), &tau), 1);
        assert_eq!(classifier_f(r(0, 1), &tau), 0);
        let three = KThreshold::new(vec![r(1, 4), r(1, 2), r(3, 4)], gamma).unwrap();
        assert_eq!(classifier_f(r(1, 1), &three), 3);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(ThresholdGrid::new(s(1, 4), 2).unwrap().len(), 10);
        assert_eq!(ThresholdGrid::new(s(1, 2), 1).unwrap().len(), 3);
        assert_eq!(ThresholdGrid::new(s(1, 20), 2).unwrap().len(), 210);
        assert!(ThresholdGrid::new(s(1, 2), 4).is_err());
    }

    #[test]
    fn scaled_sum_examples() {
        for (k, expect) in [(1, r(1, 2)), (2, r(1, 2))] {
            let grid = ThresholdGrid::new(s(1, 4), k).unwrap();
            let values: Vec<u32> = grid.taus().iter().map(|t| classifier_f(r(1, 2), t)).collect();
            assert_eq!(scaled_sum(&grid, &values).unwrap().ratio(), expect);
        }
        let grid = ThresholdGrid::new(s(1, 4), 2).unwrap();
        assert!(scaled_sum(&grid, &[0; 3]).is_err());
        assert_eq!(scaled_sum(&grid, &[0; 10]).unwrap(), GridValue::zero());
    }

    #[test]
    fn separated_set_excludes_near_components() {
        let grid = ThresholdGrid::new(s(1, 2), 1).unwrap();
        let kept = separated_set(r(1, 2), &grid);
        let kept: Vec<Ratio64> = kept.iter().map(|&t| grid.tau(t).components()[0]).collect();
        assert_eq!(kept, vec![r(0, 1), r(1, 1)]);
    }

    #[test]
    fn integer_view_matches_rational_operator() {
        let gamma = s(1, 8);
        let grid = ThresholdGrid::new(gamma, 2).unwrap();
        let int = grid.integer_view(10);
        for p in 0..=10 {
            for t in 0..grid.len() {
                assert_eq!(int.thr(p * int.label_factor, t), thr_operator(g(p, 10), grid.tau(t), gamma));
            }
        }
    }

    #[test]
    fn threshold_class_shape() {
        let h = HypothesisClass::total(2, 4, vec![vec![1, 3], vec![2, 2]]).unwrap();
        let phi = build_threshold_class(&h, s(1, 4), 2).unwrap();
        assert_eq!(phi.class.domain_size(), 20);
        assert_eq!(phi.class.len(), 2);
        let (x, t) = phi.split(phi.point(1, 7));
        assert_eq!((x, t), (1, 7));
        let y = h.value(0, 1).unwrap();
        assert_eq!(phi.class.entry(0, phi.point(1, 7)), thr_operator(y, phi.grid.tau(7), s(1, 4)));
    }
}
