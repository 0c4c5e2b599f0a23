//! Fat, strong-fat and k-Natarajan dimensions with verified witnesses, and the packing sandwich.
//!
//! Run with `cargo run --example dimensions`.

use listreg::dimensions::{
    fat_dim, k_natarajan_dim, packing_sandwich_check, strong_fat_dim, verify_fat_witness, verify_strong_witness,
};
use listreg::harness::build_example1;
use listreg::harness::fixtures::random_total_class;
use listreg::learner::build_threshold_class;
use listreg::model::Scale;

fn main() -> listreg::Result<()> {
    let gamma = Scale::new(1, 20)?;
    for n in 3..=5 {
        let h = build_example1(n)?;
        for k in 1..=2 {
            let fat = fat_dim(&h, gamma, k)?;
            let strong = strong_fat_dim(&h, gamma, k)?;
            verify_fat_witness(&h, gamma, k, &fat.witness)?;
            verify_strong_witness(&h, gamma, k, &strong.witness)?;
            println!("Example1({n}) k={k}: fat {} strong {}", fat.dimension, strong.dimension);
        }
    }

    // Lists of size two cannot separate three anchor bands on the tail coordinates.
    let fat = fat_dim(&build_example1(4)?, gamma, 2)?;
    println!("witness for k=2: {}", fat.witness.to_json());

    let h = random_total_class(3, 12, 4, 7)?;
    let coarse = Scale::new(1, 4)?;
    for k in 1..=2 {
        let phi = build_threshold_class(&h, coarse, k)?;
        let nat = k_natarajan_dim(&phi.class, k)?.dimension;
        let half = fat_dim(&h, coarse.half(), k)?.dimension;
        println!("random class k={k}: natarajan of threshold class {nat} <= fat at gamma/2 {half}");
        let sandwich = packing_sandwich_check(&h, Scale::new(1, 8)?, k)?;
        println!("  packing sandwich: {}", sandwich.to_json());
    }
    Ok(())
}
