//! The two named example classes.

use crate::error::{Error, Result};
use crate::model::HypothesisClass;

pub const EXAMPLE1_MAX_POINTS: usize = 12;
pub const EXAMPLE2_MAX_POINTS: usize = 6;

/// First three coordinates range over {0.1, 0.2, 0.3}, the rest over {0.1, 0.2}; resolution 10.
pub fn build_example1(n: usize) -> Result<HypothesisClass> {
    if !(3..=EXAMPLE1_MAX_POINTS).contains(&n) {
        return Err(Error::ExceedsDeskScale(format!("example 1 needs 3 <= n <= {EXAMPLE1_MAX_POINTS}, got {n}")));
    }
    let mut rows: Vec<Vec<u32>> = vec![vec![]];
    for i in 0..n {
        let choices: &[u32] = if i < 3 { &[1, 2, 3] } else { &[1, 2] };
        rows = rows
            .into_iter()
            .flat_map(|r| {
                choices.iter().map(move |&c| {
                    let mut r = r.clone();
                    r.push(c);
                    r
                })
            })
            .collect();
    }
    HypothesisClass::total(n, 10, rows)
}

/// `h_{b,c}(x_i) = c_i/2 + 3 b_i/8 + (1/16) sum_{j<=n} 2^{-j} b_j` over all `(b, c)`; resolution `2^{n+4}`.
pub fn build_example2(n: usize) -> Result<HypothesisClass> {
    if !(1..=EXAMPLE2_MAX_POINTS).contains(&n) {
        return Err(Error::ExceedsDeskScale(format!("example 2 needs 1 <= n <= {EXAMPLE2_MAX_POINTS}, got {n}")));
    }
    let q: u32 = 1 << (n + 4);
    let mut rows = Vec::with_capacity(1 << (2 * n));
    for b in 0u32..(1 << n) {
        let bit = |i: usize| (b >> (n - 1 - i)) & 1;
        // (1/16) * sum_j 2^{-j} b_j with j = 1..n, over denominator 2^{n+4}.
        let tail: u32 = (0..n).map(|j| bit(j) << (n - 1 - j)).sum();
        for c in 0u32..(1 << n) {
            let cbit = |i: usize| (c >> (n - 1 - i)) & 1;
            let row = (0..n).map(|i| cbit(i) * (q / 2) + bit(i) * (3 * q / 8) + tail).collect();
            rows.push(row);
        }
    }
    HypothesisClass::total(n, q, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GridValue;

    #[test]
    fn example1_sizes() {
        assert_eq!(build_example1(3).unwrap().len(), 27);
        assert_eq!(build_example1(4).unwrap().len(), 54);
        assert!(build_example1(2).is_err());
    }

    #[test]
    fn example2_single_point_values() {
        let h = build_example2(1).unwrap();
        let mut vals: Vec<GridValue> = (0..h.len()).map(|r| h.value(r, 0).unwrap()).collect();
        vals.sort();
        let want: Vec<GridValue> =
            [(0, 1), (13, 32), (1, 2), (29, 32)].iter().map(|&(p, q)| GridValue::new(p, q).unwrap()).collect();
        assert_eq!(vals, want);
        assert_eq!(build_example2(3).unwrap().len(), 64);
    }
}
