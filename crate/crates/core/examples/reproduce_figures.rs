//! Runs every experiment and writes the figure data plus a report.
//!
//! ```text
//! cargo run --release --example reproduce_figures [out_dir]
//! ```

use std::path::PathBuf;

use expmodel::pipeline::{cmd_reproduce, RunConfig};

pub fn run(out_dir: PathBuf) -> expmodel::Result<()> {
    let cfg = RunConfig {
        out_dir,
        ..RunConfig::default()
    };
    let result = cmd_reproduce(&cfg)?;
    for check in &result.checks {
        println!(
            "[{}] {:<28} {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.label,
            check.computed
        );
    }
    for file in &result.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> expmodel::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("expmodel-figures"));
    run(out_dir)
}
