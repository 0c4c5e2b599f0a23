//! Runs the full verification suite and prints one line per property.
//!
//! Run with `cargo run --release --example verify`.

use listreg::harness::verify_suite;

fn main() -> listreg::Result<()> {
    let report = verify_suite(None)?;
    for p in &report.properties {
        println!("{} {} ({} checked, {} violations)", if p.passed() { "PASS" } else { "FAIL" }, p.name, p.checked, p.violations);
    }
    println!("all passed: {}", report.passed());
    Ok(())
}
