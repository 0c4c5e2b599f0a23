//! Compression accounting of a run, exact reconstruction from the record, and the generalization bound.
//!
//! Run with `cargo run --release --example compression`.

use listreg::compression::{account, generalization_bound, Confidence};
use listreg::harness::build_example1;
use listreg::harness::fixtures::row_sample;
use listreg::learner::{reg_realizable, PipelineParams, PipelineRecord};
use listreg::model::Scale;

fn main() -> listreg::Result<()> {
    let h = build_example1(3)?;
    let sample = row_sample(&h, 7, &[0, 1, 2, 0, 1, 2, 2, 1]);
    let run = reg_realizable(&sample, &h, &PipelineParams::new(Scale::new(1, 20)?, 2).with_sizes(12, 4).with_seed(2))?;

    let record = account(&run.record, sample.len());
    println!("compression: {}", record.to_json(None));

    let restored = PipelineRecord::from_json(&run.record.to_json())?.reconstruct(&h)?;
    println!("reconstruction from the serialized record matches: {}", restored == run.hypothesis);

    // The bound needs samples at least twice the compression size.
    let delta = Confidence::new(0.05)?;
    for n in [record.size as usize * 2, 10_000, 1_000_000] {
        let b = generalization_bound(n, record.size, delta, 0.0, 0.0, 1.0)?;
        println!("n={n}: bound {b:.4}");
    }
    Ok(())
}
