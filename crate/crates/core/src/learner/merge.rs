//! Merging per-threshold label lists into at most `k` real labels.
//!
//! A reconstruction `c_hat = min(1, gamma * sum / C(floor(1/gamma), k-1))` is
//! admitted when some `c` in `[0,1]` within `r/3` agrees with the chosen
//! labels on every threshold separated from `c`. Membership in the separated
//! set and the classifier value only change at multiples of `gamma/2`, so
//! `[0,1]` splits into finitely many cells (those points and the open gaps
//! between them) on which the constraints are constant. Both modes decide
//! the existential cell by cell; they differ in how label choices are explored.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::aggregate::MulticlassList;
use super::threshold::ThresholdGrid;
use crate::error::{Error, Result};
use crate::model::grid::Ratio64;
use crate::model::{GridValue, LabelList};

/// How label choices are explored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MergeMode {
    /// Every indexing function, one at a time.
    Exhaustive { cap: u64 },
    /// Per cell: forced thresholds checked directly, free ones folded into a subset-sum table.
    #[default]
    Candidate,
}


#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub list: LabelList,
    /// The admitted reconstructions, sorted.
    pub admitted: Vec<GridValue>,
    /// Smallest radius at which `list` covers `admitted`; zero when nothing was admitted.
    pub radius: Ratio64,
}

/// A region of `[0,1]` with constant constraints.
struct Cell {
    lo: Ratio64,
    hi: Ratio64,
    open: bool,
    /// Required label per threshold, `None` when the threshold is not separated.
    required: Vec<Option<u32>>,
}

impl Cell {
    fn admits(&self, c_hat: Ratio64, slack: Ratio64) -> bool {
        if self.open {
            c_hat > self.lo - slack && c_hat < self.hi + slack
        } else {
            c_hat >= self.lo - slack && c_hat <= self.hi + slack
        }
    }
}

fn cells(grid: &ThresholdGrid) -> Vec<Cell> {
    let half = grid.gamma().ratio() / 2;
    let one = Ratio64::from_integer(1);
    let mut marks = Vec::new();
    let mut m = Ratio64::zero();
    while m < one {
        marks.push(m);
        m += half;
    }
    marks.push(one);
    let constraints = |c: Ratio64| -> Vec<Option<u32>> {
        grid.taus()
            .iter()
            .map(|tau| {
                let comps = tau.components();
                comps.iter().all(|&t| (t - c).abs() >= half).then(|| comps.iter().filter(|&&t| c > t).count() as u32)
            })
            .collect()
    };
    let mut out = Vec::with_capacity(2 * marks.len());
    for (i, &p) in marks.iter().enumerate() {
        out.push(Cell { lo: p, hi: p, open: false, required: constraints(p) });
        if let Some(&q) = marks.get(i + 1) {
            out.push(Cell { lo: p, hi: q, open: true, required: constraints((p + q) / 2) });
        }
    }
    out
}

fn reconstruction(grid: &ThresholdGrid, sum: u64) -> Result<Ratio64> {
    let norm = grid.normaliser().to_i64().ok_or_else(|| Error::ExceedsDeskScale("normaliser overflows".into()))?;
    let v = grid.gamma().ratio() * Ratio64::from_integer(sum as i64) / Ratio64::from_integer(norm);
    Ok(v.min(Ratio64::from_integer(1)))
}

/// Merges `J` (one list per threshold, in grid order) with cover radius `r`.
pub fn merge_lists(j: &[MulticlassList], r: Ratio64, grid: &ThresholdGrid, mode: MergeMode) -> Result<MergeOutcome> {
    if j.len() != grid.len() {
        return Err(Error::Precondition(format!("{} lists supplied for {} thresholds", j.len(), grid.len())));
    }
    let k = grid.k();
    if let Some(bad) = j.iter().flat_map(|l| l.labels()).find(|&&y| y as usize > k) {
        return Err(Error::InvalidValue(format!("label {bad} exceeds {k}")));
    }
    let admitted = if j.iter().any(MulticlassList::is_empty) {
        BTreeSet::new()
    } else {
        let cells = cells(grid);
        let slack = r / 3;
        match mode {
            MergeMode::Exhaustive { cap } => exhaustive(j, grid, &cells, slack, cap)?,
            MergeMode::Candidate => candidate(j, grid, &cells, slack)?,
        }
    };
    let admitted: Vec<Ratio64> = admitted.into_iter().collect();
    let (centers, radius) = min_radius_cover(&admitted, k);
    if radius > r {
        return Err(Error::CoverViolation(format!(
            "{} admitted values need radius {radius} > {r} with {k} centers",
            admitted.len()
        )));
    }
    Ok(MergeOutcome {
        list: LabelList::new(centers.into_iter().map(GridValue::from_ratio).collect::<Result<_>>()?),
        admitted: admitted.into_iter().map(GridValue::from_ratio).collect::<Result<_>>()?,
        radius,
    })
}

fn exhaustive(j: &[MulticlassList], grid: &ThresholdGrid, cells: &[Cell], slack: Ratio64, cap: u64) -> Result<BTreeSet<Ratio64>> {
    let count = j.iter().try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64)).unwrap_or(u64::MAX);
    if count > cap {
        return Err(Error::ExceedsDeskScale(format!("{count} indexing functions exceed the cap {cap}")));
    }
    let mut admitted = BTreeSet::new();
    let mut idx = vec![0usize; j.len()];
    loop {
        let chosen: Vec<u32> = idx.iter().zip(j).map(|(&i, l)| l.labels()[i]).collect();
        let c_hat = reconstruction(grid, chosen.iter().map(|&v| v as u64).sum())?;
        let ok = cells.iter().any(|cell| {
            cell.admits(c_hat, slack) && cell.required.iter().zip(&chosen).all(|(req, &v)| req.is_none_or(|f| f == v))
        });
        if ok {
            admitted.insert(c_hat);
        }
        // Odometer over the product of lists.
        let mut t = 0;
        loop {
            if t == idx.len() {
                return Ok(admitted);
            }
            idx[t] += 1;
            if idx[t] < j[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

fn candidate(j: &[MulticlassList], grid: &ThresholdGrid, cells: &[Cell], slack: Ratio64) -> Result<BTreeSet<Ratio64>> {
    let max_sum = grid.k() * j.len();
    let words = max_sum / 64 + 1;
    let mut admitted = BTreeSet::new();
    for cell in cells {
        let mut forced = 0u64;
        let mut consistent = true;
        // Bit `s` set iff the free thresholds can sum to `s`.
        let mut reach = vec![0u64; words];
        reach[0] = 1;
        for (req, list) in cell.required.iter().zip(j) {
            match req {
                Some(f) => {
                    if !list.contains(*f) {
                        consistent = false;
                        break;
                    }
                    forced += *f as u64;
                }
                None => {
                    let mut next = vec![0u64; words];
                    for &v in list.labels() {
                        shift_or(&mut next, &reach, v as usize);
                    }
                    reach = next;
                }
            }
        }
        if !consistent {
            continue;
        }
        for s in 0..=max_sum {
            if reach[s / 64] >> (s % 64) & 1 == 1 {
                let c_hat = reconstruction(grid, forced + s as u64)?;
                if cell.admits(c_hat, slack) {
                    admitted.insert(c_hat);
                }
            }
        }
    }
    Ok(admitted)
}

/// `dst |= src << shift` over little-endian bit vectors of equal length.
fn shift_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word, bit) = (shift / 64, shift % 64);
    for i in (word..dst.len()).rev() {
        let lo = src[i - word] << bit;
        let carry = if bit > 0 && i > word { src[i - word - 1] >> (64 - bit) } else { 0 };
        dst[i] |= lo | carry;
    }
}

/// Greedy cover of sorted `points` by centers drawn from `points`: each center is the
/// rightmost point within `radius` of the leftmost uncovered point.
fn greedy_cover(points: &[Ratio64], radius: Ratio64) -> Vec<Ratio64> {
    let mut centers = Vec::new();
    let mut i = 0;
    while i < points.len() {
        let start = points[i];
        let mut c = i;
        while c + 1 < points.len() && points[c + 1] - start <= radius {
            c += 1;
        }
        centers.push(points[c]);
        while i < points.len() && points[i] - points[c] <= radius {
            i += 1;
        }
    }
    centers
}

/// Smallest radius at which at most `k` of the sorted `points` cover all of them, with those centers.
pub fn min_radius_cover(points: &[Ratio64], k: usize) -> (Vec<Ratio64>, Ratio64) {
    if points.is_empty() {
        return (Vec::new(), Ratio64::zero());
    }
    let mut radii: Vec<Ratio64> = vec![Ratio64::zero()];
    for (a, &p) in points.iter().enumerate() {
        radii.extend(points[a + 1..].iter().map(|&q| q - p));
    }
    radii.sort();
    radii.dedup();
    // The greedy count is optimal for centers drawn from the points, hence monotone in the radius.
    let (mut lo, mut hi) = (0, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if greedy_cover(points, radii[mid]).len() <= k {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (greedy_cover(points, radii[lo]), radii[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::threshold::{classifier_f, separated_set};
    use crate::model::Scale;

    fn grid(p: i64, q: i64, k: usize) -> ThresholdGrid {
        ThresholdGrid::new(Scale::new(p, q).unwrap(), k).unwrap()
    }

    fn r(p: i64, q: i64) -> Ratio64 {
        Ratio64::new(p, q)
    }

    fn truthful(g: &ThresholdGrid, a: Ratio64) -> Vec<MulticlassList> {
        g.taus().iter().map(|t| MulticlassList::new(vec![classifier_f(a, t)])).collect()
    }

    const EXH: MergeMode = MergeMode::Exhaustive { cap: 1 << 20 };

    #[test]
    fn single_truthful_list_returns_its_value() {
        let g = grid(1, 2, 1);
        let j = truthful(&g, r(1, 1));
        for mode in [EXH, MergeMode::Candidate] {
            let out = merge_lists(&j, r(3, 2), &g, mode).unwrap();
            assert_eq!(out.list, LabelList::single(GridValue::one()));
            assert_eq!(out.admitted, vec![GridValue::one()]);
        }
    }

    #[test]
    fn inconsistent_lists_admit_nothing() {
        let g = grid(1, 2, 1);
        // Threshold 0 says "below", threshold 1 says "above": no c agrees with both.
        let j = vec![MulticlassList::new(vec![0]), MulticlassList::new(vec![0]), MulticlassList::new(vec![1])];
        for mode in [EXH, MergeMode::Candidate] {
            let out = merge_lists(&j, r(3, 2), &g, mode).unwrap();
            assert!(out.list.is_empty());
            assert!(out.admitted.is_empty());
        }
    }

    #[test]
    fn truthful_lists_reconstruct_grid_values() {
        for (p, q, k) in [(1, 4, 1), (1, 4, 2), (1, 5, 2)] {
            let g = grid(p, q, k);
            let r0 = g.gamma().ratio() * (6 * k as i64 + 3);
            for step in 0..=g.steps() as i64 {
                let a = g.gamma().ratio() * step;
                let out = merge_lists(&truthful(&g, a), r0, &g, MergeMode::Candidate).unwrap();
                assert!(out.admitted.contains(&GridValue::from_ratio(a).unwrap()));
                assert!(out.list.len() <= k);
                let covered = out.admitted.iter().all(|c| out.list.values().iter().any(|m| m.abs_diff(*c) <= out.radius));
                assert!(covered);
                assert!(out.list.values().iter().all(|m| out.admitted.contains(m)));
            }
        }
    }

    #[test]
    fn modes_agree_on_two_label_lists() {
        let g = grid(1, 4, 2);
        assert_eq!(g.len(), 10);
        let mut state = 0x9e37_79b9_u64;
        for _ in 0..60 {
            let j: Vec<MulticlassList> = (0..g.len())
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let a = (state >> 33) % 3;
                    let b = (state >> 40) % 3;
                    MulticlassList::new(vec![a as u32, b as u32])
                })
                .collect();
            let r0 = g.gamma().ratio() * 15;
            let a = merge_lists(&j, r0, &g, EXH);
            let b = merge_lists(&j, r0, &g, MergeMode::Candidate);
            match (a, b) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(Error::CoverViolation(_)), Err(Error::CoverViolation(_))) => {}
                (a, b) => panic!("modes disagree: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn separated_thresholds_force_labels() {
        let g = grid(1, 2, 1);
        assert_eq!(separated_set(r(1, 2), &g), vec![0, 2]);
    }

    #[test]
    fn cover_uses_smallest_radius() {
        let pts = vec![r(0, 1), r(1, 10), r(1, 2), r(6, 10)];
        let (centers, radius) = min_radius_cover(&pts, 2);
        assert_eq!(radius, r(1, 10));
        assert_eq!(centers, vec![r(1, 10), r(6, 10)]);
        let (one, rad1) = min_radius_cover(&pts, 1);
        assert_eq!((one, rad1), (vec![r(1, 2)], r(1, 2)));
        assert!(centers.iter().all(|c| pts.contains(c)));
    }

    #[test]
    fn shift_or_crosses_words() {
        let mut dst = vec![0u64; 2];
        shift_or(&mut dst, &[1u64 << 63, 0], 1);
        assert_eq!(dst, vec![0, 1]);
    }
}
