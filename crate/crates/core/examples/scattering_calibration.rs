//! The calibrated scattering function and the uncertainty it implies.
//!
//! Prints the kernel profile and compares the closed-form calibration
//! entropy against direct quadrature of the kernel over the span.
//!
//! ```text
//! cargo run --example scattering_calibration
//! ```

use expmodel::{entropy_quadrature, QuadratureGrid, ScatteringFunction, SpanConfig};

pub fn run() -> expmodel::Result<()> {
    let span = SpanConfig::new(2.0)?;
    println!("kernel profile g(x - 0, sigma):");
    for sigma in [0.1, 0.2, 0.4] {
        let sf = ScatteringFunction::new(sigma, span)?;
        let profile: Vec<String> = [0.0, 0.1, 0.2, 0.4, 0.8]
            .iter()
            .map(|&x| format!("{:.4}", sf.channel(x, 0.0)))
            .collect();
        println!("  sigma={sigma:<4} at x=0,0.1,0.2,0.4,0.8: {}", profile.join("  "));
    }

    println!();
    println!("calibration uncertainty H_u (L = {}):", span.half_width());
    for sigma in [0.05, 0.1, 0.2, 0.4] {
        let sf = ScatteringFunction::new(sigma, span)?;
        let grid = QuadratureGrid::for_kernel(&sf);
        let numeric = entropy_quadrature(|x, y| sf.channel(x, 0.0) * sf.channel(y, 0.0), &grid)?
            - 2.0 * span.width().ln();
        println!(
            "  sigma={sigma:<5} closed form {:>9.5}  quadrature {:>9.5}  ({} points/axis)",
            sf.calibration_entropy(),
            numeric,
            grid.points_per_axis()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    run()
}
