//! Threshold reduction and MergeLists: reconstruct candidate labels from per-threshold lists and cover them.
//!
//! Run with `cargo run --example merge_lists`.

use listreg::harness::fixtures::{compliant_lists, rng};
use listreg::learner::{classifier_f, merge_lists, scaled_sum, MergeMode, ThresholdGrid};
use listreg::model::{Ratio64, Scale};

fn main() -> listreg::Result<()> {
    // Ten thresholds keep the exhaustive mode within its cap.
    let (gamma, k) = (Scale::new(1, 5)?, 2);
    let grid = ThresholdGrid::new(gamma, k)?;
    println!("{} thresholds for gamma=1/5, k={k}", grid.len());

    let a = Ratio64::new(3, 5);
    let values: Vec<u32> = grid.taus().iter().map(|t| classifier_f(a, t)).collect();
    println!("scaled sum of f(3/5, tau) over all tau: {}", scaled_sum(&grid, &values)?);

    let radius = gamma.ratio() * (6 * k as i64 + 3);
    let mut r = rng(4);
    for truth in [Ratio64::new(1, 10), Ratio64::new(11, 20), Ratio64::new(9, 10)] {
        let lists = compliant_lists(&grid, truth, &mut r);
        let out = merge_lists(&lists, radius, &grid, MergeMode::Candidate)?;
        let exhaustive = merge_lists(&lists, radius, &grid, MergeMode::Exhaustive { cap: 1 << 22 })?;
        println!(
            "truth {truth}: list {:?} covers {} admitted values at radius {} (modes agree: {})",
            out.list.values().iter().map(ToString::to_string).collect::<Vec<_>>(),
            out.admitted.len(),
            out.radius,
            out == exhaustive
        );
    }
    Ok(())
}
