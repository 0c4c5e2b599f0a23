//! The (gamma, k) one-inclusion-graph dimension, searched exactly up to a projection length.
//!
//! Run with `cargo run --example oig_dimension`.

use listreg::harness::build_example2;
use listreg::model::Scale;
use listreg::oig::{koig_dim, OigDimOptions};

fn main() -> listreg::Result<()> {
    let gamma = Scale::new(1, 4)?;
    for n in 1..=3 {
        let h = build_example2(n)?;
        let opts = OigDimOptions { n_max: n, ..OigDimOptions::default() };
        for k in 1..=2 {
            let d = koig_dim(&h, gamma, k, &opts)?;
            println!("Example2({n}) k={k}: dimension {} (exact up to {}: {})", d.dimension, d.n_max, d.exact_up_to_n_max);
            if let Some(w) = &d.witness {
                println!("  witness points {:?}, {} vertices, outdegree threshold {}", w.points, w.vertices.len(), w.threshold);
            }
        }
    }
    Ok(())
}
