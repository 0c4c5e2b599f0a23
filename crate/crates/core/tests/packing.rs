//! Packing numbers against an independent brute-force oracle.

use listreg::dimensions::{k_ary_packing, packing_sandwich_check, packing_upper_bound, verify_packing_witness};
use listreg::harness::build_example1;
use listreg::model::{HypothesisClass, Scale};

/// Whether some point takes three distinct values on rows `a`, `b`, `c` of a class whose values
/// differ by at least `2 gamma` whenever they differ (Example 1 at `gamma = 1/20`).
fn separated(rows: &[Vec<Option<u32>>], a: usize, b: usize, c: usize) -> bool {
    (0..rows[a].len()).any(|x| {
        let (u, v, w) = (rows[a][x], rows[b][x], rows[c][x]);
        u != v && v != w && u != w
    })
}

/// True when some `size` rows have every triple separated.
fn has_packing(rows: &[Vec<Option<u32>>], size: usize) -> bool {
    fn extend(rows: &[Vec<Option<u32>>], chosen: &mut Vec<usize>, start: usize, size: usize) -> bool {
        if chosen.len() == size {
            return true;
        }
        for r in start..rows.len() {
            let fits = chosen.iter().enumerate().all(|(i, &a)| chosen[i + 1..].iter().all(|&b| separated(rows, a, b, r)));
            if fits {
                chosen.push(r);
                if extend(rows, chosen, r + 1, size) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(rows, &mut Vec::new(), 0, size)
}

#[test]
fn example1_packing_is_six() {
    let h = build_example1(3).unwrap();
    let gamma = Scale::new(1, 20).unwrap();
    let (m, w) = k_ary_packing(&h, gamma, 2).unwrap();
    assert_eq!(m, 6);
    verify_packing_witness(&h, gamma, 2, &w).unwrap();
    assert!(has_packing(h.rows(), 6));
    assert!(!has_packing(h.rows(), 7));
}

#[test]
fn one_point_with_k_plus_one_separated_values_meets_the_upper_bound_strictly() {
    // Three constants 2 gamma apart pack three rows; the bound must exceed 3.
    let h = HypothesisClass::total(1, 4, vec![vec![0], vec![1], vec![2]]).unwrap();
    let report = packing_sandwich_check(&h, Scale::new(1, 8).unwrap(), 2).unwrap();
    assert_eq!(report.packing, 3);
    assert!(report.passed(), "{}", report.to_json());
    let (y, e, _) = packing_upper_bound(2, 3, 1, 1);
    assert_eq!((y, e), (1.into(), 1));
    assert_eq!(packing_upper_bound(2, 3, 1, 0).1, 0);
}
