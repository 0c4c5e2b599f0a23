//! Realizable list regression through the threshold reduction, weak learner, minimax game and merge.
//!
//! Run with `cargo run --release --example realizable_pipeline`.

use listreg::harness::build_example1;
use listreg::learner::{reg_realizable, PipelineParams};
use listreg::model::{exact_string, population_error, FiniteDistribution, Scale};

fn main() -> listreg::Result<()> {
    let h = build_example1(4)?;
    let target = 11;
    let labelled: Vec<_> = (0..h.domain_size()).map(|x| (x, h.value(target, x).expect("total class"))).collect();
    let dist = FiniteDistribution::uniform(&labelled)?;
    let (gamma, k) = (Scale::new(1, 20)?, 2);
    for n in [10, 40] {
        let sample = dist.sample(n, 1)?;
        // Worst-case constants exceed desk scale; m is set explicitly, l keeps its default.
        let params = PipelineParams { m: Some(60), ..PipelineParams::new(gamma, k).with_seed(3) };
        let run = reg_realizable(&sample, &h, &params)?;
        println!(
            "n={n}: training error {}, test error {}, game value {} < {}, m={} l={}",
            exact_string(&run.training_error),
            exact_string(&population_error(&run.hypothesis, &dist)?),
            exact_string(&run.game.value),
            exact_string(&run.game_target),
            run.constants.m,
            run.constants.l
        );
        for (x, mu) in run.hypothesis.predictions.iter().enumerate() {
            println!("  x{x}: {:?} (truth {})", mu.values().iter().map(ToString::to_string).collect::<Vec<_>>(), labelled[x].1);
        }
    }
    Ok(())
}
