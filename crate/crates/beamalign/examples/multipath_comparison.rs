//! Runs the low-SNR multipath scenario and prints median SNR loss for
//! the agile scheme, exhaustive search and the 802.11ad baseline.

use beamalign::experiment::{run, ExperimentConfig, Scenario};

fn main() -> beamalign::Result<()> {
    let mut cfg = ExperimentConfig::for_scenario(Scenario::Multipath);
    cfg.trials = 100; // 500 in the full benchmark
    let out = run(&cfg)?;
    print!("{}", out.summary);
    Ok(())
}
