//! Agnostic list regression: relabel by empirical risk minimization, then learn realizably.
//!
//! Run with `cargo run --release --example agnostic_pipeline`.

use listreg::harness::build_example1;
use listreg::learner::{erm_row, reg_agnostic, PipelineParams};
use listreg::model::{exact_string, population_error, Atom, Exact, FiniteDistribution, GridValue, Scale};

fn main() -> listreg::Result<()> {
    let h = build_example1(3)?;
    let target = 4;
    // A quarter of the mass at each point carries a label no row agrees with.
    let mut support = Vec::new();
    for x in 0..3 {
        let clean = h.value(target, x).expect("total class");
        support.push(Atom { point: x, label: clean, mass: Exact::new(1.into(), 4.into()) });
        support.push(Atom { point: x, label: GridValue::new(9, 10)?, mass: Exact::new(1.into(), 12.into()) });
    }
    let dist = FiniteDistribution::new(support)?;
    let sample = dist.sample(30, 5)?;
    let run = reg_agnostic(&sample, &h, &PipelineParams::new(Scale::new(1, 20)?, 2).with_sizes(40, 8).with_seed(5))?;
    println!("empirical risk minimizer: row {} (run reports {:?})", erm_row(&sample, &h)?, run.erm_row);
    println!("training error {}", exact_string(&run.training_error));
    println!("population error {}", exact_string(&population_error(&run.hypothesis, &dist)?));
    Ok(())
}
