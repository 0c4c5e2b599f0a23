//! A seeded experiment sweep: learning curves with confidence half-widths, per-run assertions, CSV.
//!
//! Run with `cargo run --release --example experiment`.

use listreg::harness::{run_experiment, ClassSpec, DistributionSpec, ExperimentConfig, LearnerMode};

fn main() -> listreg::Result<()> {
    let cfg = ExperimentConfig {
        class: ClassSpec::Example1 { n: 5 },
        distribution: DistributionSpec::Realizable { weights: None, target: None },
        mode: LearnerMode::Realizable,
        gamma: "1/20".into(),
        k: 2,
        sample_sizes: vec![10, 20, 40],
        trials: 20,
        seed: 11,
        m: Some(100),
        l: None,
        constant_scale: None,
        delta: 0.05,
        bound_constant: 1.0,
        output: None,
    };
    let report = run_experiment(&cfg)?;
    for c in &report.curves {
        println!("n={:>3}: test error {:.4} +- {:.4}, training error {:.4}", c.n, c.test.mean, c.test.half_width, c.training.mean);
    }
    for p in &report.properties {
        println!("{} {} ({} checked)", if p.passed() { "PASS" } else { "FAIL" }, p.name, p.checked);
    }
    print!("{}", report.csv());
    Ok(())
}
