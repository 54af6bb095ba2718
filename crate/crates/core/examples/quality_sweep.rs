//! Predictor quality as the basic set grows, for three independent sample sets.
//!
//! ```text
//! cargo run --release --example quality_sweep
//! ```

use expmodel::pipeline::{experiment_seeds, quality_runs, quality_spread, RunConfig};

pub fn run() -> expmodel::Result<()> {
    let cfg = RunConfig {
        schedule: Some(vec![1, 2, 4, 8, 15, 32, 45, 64, 100, 150, 200]),
        ..RunConfig::default()
    };
    let rows = quality_runs(&cfg)?;
    let seeds = experiment_seeds(cfg.seed);

    print!("{:>5}", "N");
    for seed in &seeds {
        print!(" {:>9}", format!("Q seed {seed}"));
    }
    println!();
    for &n in cfg.schedule.as_deref().unwrap_or_default() {
        print!("{n:>5}");
        for seed in &seeds {
            let q = rows.iter().find(|r| r.0 == *seed && r.1 == n).map(|r| r.2.q);
            print!(" {:>9.4}", q.unwrap_or(f64::NAN));
        }
        println!();
    }
    if let Some(spread) = quality_spread(&rows, 50) {
        println!("largest spread between seeds for N >= 50: {spread:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    run()
}
