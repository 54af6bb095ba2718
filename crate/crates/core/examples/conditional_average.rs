//! The conditional-average predictor built from a reduced basic set and
//! evaluated on an independently seeded test set.
//!
//! ```text
//! cargo run --example conditional_average
//! ```

use expmodel::generator::{generate, GenerationMeta};
use expmodel::pipeline::{test_seed, DEFAULT_SIGMA, DEFAULT_SPAN_L, PREDICT_BASIC_N};
use expmodel::{CaPredictor, Predictions, ScatteringFunction, SpanConfig};

pub fn run() -> expmodel::Result<()> {
    let meta = GenerationMeta::new(1, DEFAULT_SIGMA, 200);
    let basic = generate(&meta)?.prefix(PREDICT_BASIC_N)?;
    let test = generate(&GenerationMeta::new(test_seed(1), DEFAULT_SIGMA, 200))?;
    let sf = ScatteringFunction::new(DEFAULT_SIGMA, SpanConfig::new(DEFAULT_SPAN_L)?)?;
    let predictor = CaPredictor::new(&basic, sf)?;

    println!("basic set: {} samples; test set: {} samples", basic.len(), test.len());
    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "x_t", "y_t", "y_p", "y_o", "err");
    let clean = test.clean().expect("generated data carries clean values");
    for (s, c) in test.samples().iter().zip(clean).take(10) {
        let y_p = predictor.predict(s.x)?;
        println!("{:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}", s.x, s.y, y_p, c.y, y_p - s.y);
    }

    let x = test.samples()[0].x;
    let weights = predictor.weights(x)?;
    let top = weights.iter().cloned().fold(0.0, f64::max);
    let effective = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
    println!("weights at x = {x:.3}: largest {top:.3}, effective sample count {effective:.2}");

    let report = Predictions::on(&predictor, &test)?.quality()?;
    println!(
        "Q = {:.4}  (mse {:.4}, Var y {:.3}, Var y_p {:.3}, Cov {:.3}, m(y) {:.3}, m(y_p) {:.3})",
        report.q,
        report.mse,
        report.var_true,
        report.var_pred,
        report.cov,
        report.mean_true,
        report.mean_pred
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    run()
}
