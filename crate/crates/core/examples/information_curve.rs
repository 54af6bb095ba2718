//! Experimental information, redundancy and cost over a growing sample count,
//! and the resulting choice of sample count.
//!
//! ```text
//! cargo run --release --example information_curve [seed]
//! ```

use expmodel::generator::{generate, GenerationMeta};
use expmodel::information::default_schedule;
use expmodel::pipeline::{DEFAULT_SIGMA, DEFAULT_SPAN_L};
use expmodel::{info_curve, QuadratureGrid, ScatteringFunction, SpanConfig};

pub fn run(seed: u64) -> expmodel::Result<()> {
    let data = generate(&GenerationMeta::new(seed, DEFAULT_SIGMA, 200))?;
    let sf = ScatteringFunction::new(DEFAULT_SIGMA, SpanConfig::new(DEFAULT_SPAN_L)?)?;
    let grid = QuadratureGrid::for_kernel(&sf);
    let curve = info_curve(&data, &sf, &grid, &default_schedule(data.len()))?;

    println!("{:>5} {:>8} {:>8} {:>8} {:>8} {:>8}", "N", "log N", "I", "R", "C", "K");
    for r in &curve.records {
        let marker = if r.n == curve.n_opt { "  <- min C" } else { "" };
        println!(
            "{:>5} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.2}{marker}",
            r.n, r.log_n, r.info, r.redundancy, r.cost, r.complexity
        );
    }
    println!(
        "N_opt = {}, I_inf = {:.3} nats, K_inf = {:.1}",
        curve.n_opt, curve.info_limit, curve.complexity_limit
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    run(seed)
}
