//! Realizable pipeline with the real-valued one-inclusion weak learner and quantile aggregation.
//!
//! Run with `cargo run --release --example oig_pipeline`.

use listreg::harness::build_example2;
use listreg::learner::{realizable_oig_pipeline, weak_learner_real, PipelineParams};
use listreg::model::{exact_string, LabeledSample, Scale};

fn main() -> listreg::Result<()> {
    let h = build_example2(2)?;
    let gamma = Scale::new(1, 4)?;
    let target = 5;
    let label = |x: usize| h.value(target, x).expect("total class");

    let seen = LabeledSample::new(vec![(0, label(0))]);
    let mu = weak_learner_real(&h, &seen, 1, gamma, 2)?;
    println!("weak learner on x1 after seeing x0: {:?} (truth {})", mu.values().iter().map(ToString::to_string).collect::<Vec<_>>(), label(1));

    let sample = LabeledSample::new((0..8).map(|i| (i % 2, label(i % 2))).collect());
    let run = realizable_oig_pipeline(&sample, &h, &PipelineParams::new(gamma, 2).with_seed(1))?;
    println!(
        "pipeline: training error {}, game value {}, weak sample size {}, {} subsequences",
        exact_string(&run.training_error),
        exact_string(&run.game.value),
        run.constants.m,
        run.constants.l
    );
    println!("record: {}", run.record.to_json());
    Ok(())
}
