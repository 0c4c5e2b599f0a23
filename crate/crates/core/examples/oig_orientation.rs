//! One-inclusion graph of a class and its minimum max-outdegree k-list orientation.
//!
//! Run with `cargo run --example oig_orientation`.

use listreg::harness::build_example2;
use listreg::oig::{build_oig, k_outdeg, min_max_k_outdeg, OrientMode};
use listreg::model::Scale;

fn main() -> listreg::Result<()> {
    let h = build_example2(2)?;
    let g = build_oig(&h)?;
    println!("Example2(2): {} vertices, {} edges on {} directions", g.vertices().len(), g.edges().len(), g.dims());
    // Labels are numerators over the class resolution.
    let gamma = Scale::new(1, 4)?.numer_on(h.resolution() as i64)?;
    for k in 1..=2 {
        for mode in [OrientMode::Exact, OrientMode::Greedy] {
            let best = min_max_k_outdeg(&g, gamma, k, mode)?;
            let degrees = (0..g.vertices().len()).map(|v| k_outdeg(&g, v, &best.orientation, gamma)).collect::<listreg::Result<Vec<_>>>()?;
            println!("k={k} {mode:?}: max outdegree {} (proven optimal: {}), outdegrees {degrees:?}", best.max_outdeg, best.optimal);
        }
    }
    Ok(())
}
