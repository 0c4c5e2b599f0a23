//! Lower-bound constructions: strong-shattering distributions, the heavy-point family and the pigeonhole kernel.
//!
//! Run with `cargo run --example lower_bounds`.

use listreg::dimensions::strong_fat_dim;
use listreg::harness::{build_db_distribution, build_example1, build_pv_distribution, pigeonhole_error_check};
use listreg::model::{Exact, GridValue, LabelList, Scale};

fn main() -> listreg::Result<()> {
    let h = build_example1(3)?;
    let (gamma, k) = (Scale::new(1, 20)?, 2);
    let w = strong_fat_dim(&h, gamma, k)?.witness;
    println!("strongly shattered points {:?} with anchors {}", w.points, w.to_json()["anchors"]);
    let (pattern, row) = &w.assignment[w.assignment.len() / 2];
    let d = build_db_distribution(&h, &w, pattern)?;
    println!("pattern {pattern:?} (realized by row {row}): {}", d.to_json()?);

    let p = build_pv_distribution(&h, 0, &Exact::new(1.into(), 9216.into()), 1)?;
    println!("heavy-point distribution: {}", p.to_json()?);

    let labels = [GridValue::new(3, 10)?, GridValue::new(7, 10)?];
    for mu in [0, 3, 5, 7, 10] {
        let list = LabelList::single(GridValue::new(mu, 10)?);
        let ok = pigeonhole_error_check(&list, &labels, Scale::new(1, 5)?)?;
        println!("list {{{mu}/10}} against labels {{3/10, 7/10}}: average loss at least 2 gamma/(k+1): {ok}");
    }
    Ok(())
}
