//! Kernel density estimates from noisy chaotic measurements.
//!
//! Generates 200 noisy pairs, then shows the conditional density `f(y|x)`
//! along a few vertical slices: its peak tracks the hidden law.
//!
//! ```text
//! cargo run --example density_estimation
//! ```

use expmodel::generator::{generate, GenerationMeta};
use expmodel::pipeline::{DEFAULT_SIGMA, DEFAULT_SPAN_L};
use expmodel::{DensityModel, ScatteringFunction, SpanConfig};

pub fn run() -> expmodel::Result<()> {
    let meta = GenerationMeta::new(1, DEFAULT_SIGMA, 200);
    let data = generate(&meta)?;
    let sf = ScatteringFunction::new(DEFAULT_SIGMA, SpanConfig::new(DEFAULT_SPAN_L)?)?;
    let model = DensityModel::new(data, sf)?;

    println!("{} samples, sigma = {}", model.len(), sf.sigma());
    println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "x", "f(x)", "argmax y", "law y_o", "f(y|x) peak");
    for x in [-7.0, -4.0, -1.0, 0.0, 2.5, 5.0, 7.5] {
        let marginal = model.marginal_pdf(x)?;
        let (best_y, best) = (0..=400)
            .map(|k| -10.0 + 0.05 * k as f64)
            .map(|y| (y, model.conditional_pdf(y, x).unwrap_or(0.0)))
            .fold((0.0, f64::MIN), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        println!(
            "{:>6.2} {:>10.5} {:>10.2} {:>10.2} {:>12.4}",
            x,
            marginal,
            best_y,
            meta.law(x),
            best
        );
    }

    // far outside the data the direct ratio is 0/0; the conditional stays finite
    let far = 50.0;
    println!(
        "x = {far}: f(x) = {:e}, f(y=-8|x) = {:.4}",
        model.marginal_pdf(far)?,
        model.conditional_pdf(-8.0, far)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    run()
}
