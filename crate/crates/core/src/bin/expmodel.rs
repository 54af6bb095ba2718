//! Command-line front end. All work happens in `expmodel::pipeline`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expmodel::generator::DEFAULT_GAIN;
use expmodel::pipeline::{self, RunConfig};
use expmodel::Error;

#[derive(Parser, Debug)]
#[command(name = "expmodel", version, about = "Model a physical law from noisy paired measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a noisy chaotic dataset (samples.csv)
    Generate(Common),
    /// Information curve and sample-count selection (info_curve.csv, summary.csv)
    Info {
        #[command(flatten)]
        common: Common,
        /// Dataset CSV; generated from the flags when omitted
        #[arg(long, visible_alias = "samples")]
        basic: Option<PathBuf>,
    },
    /// Conditional-average predictions on a test set (predictions.csv)
    Predict {
        #[command(flatten)]
        common: Common,
        /// Basic (training) dataset CSV
        #[arg(long)]
        basic: PathBuf,
        /// Test dataset CSV
        #[arg(long)]
        test: PathBuf,
    },
    /// Predictor quality over growing basic sets for three seeds (quality.csv)
    Quality(Common),
    /// Run every experiment and write fig2..fig5 CSVs and report.txt
    Reproduce(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scattering width of each channel (also the generated noise level)
    #[arg(long, default_value_t = pipeline::DEFAULT_SIGMA)]
    sigma: f64,
    /// Number of samples (for `predict`: optional basic-set prefix)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = pipeline::DEFAULT_SEED)]
    seed: u64,
    /// Half-width L of the instrument span (-L, L)
    #[arg(long = "span-l", default_value_t = pipeline::DEFAULT_SPAN_L)]
    span_l: f64,
    /// Channel gain of the generated clean signal
    #[arg(long, default_value_t = DEFAULT_GAIN)]
    gain: f64,
    /// Quadrature points per axis (default: step sigma/8)
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    /// Comma-separated, strictly increasing sample counts
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            sigma: self.sigma,
            n: self.n.unwrap_or(pipeline::DEFAULT_N),
            seed: self.seed,
            span_l: self.span_l,
            gain: self.gain,
            grid_points: self.grid_points,
            schedule: self.schedule.clone(),
            out_dir: self.out_dir.clone(),
        }
    }
}

fn init_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("EXPMODEL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("EXPMODEL_THREADS={raw:?} is not a count")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    init_threads()?;
    match cli.command {
        Command::Generate(common) => {
            let (path, data) = pipeline::cmd_generate(&common.config())?;
            println!("wrote {} ({} samples)", path.display(), data.len());
        }
        Command::Info { common, basic } => {
            let cfg = common.config();
            let curve = pipeline::cmd_info(&cfg, basic.as_deref())?;
            println!(
                "N_opt={} I_inf={:.4} K_inf={:.2} ({} records) -> {}",
                curve.n_opt,
                curve.info_limit,
                curve.complexity_limit,
                curve.records.len(),
                cfg.out_dir.display()
            );
        }
        Command::Predict { common, basic, test } => {
            let cfg = common.config();
            let outcome = pipeline::cmd_predict(&cfg, &basic, &test, common.n)?;
            if outcome.outside_span > 0 {
                eprintln!(
                    "warning: {} test inputs lie outside the span (|x| > {}); predictions there extrapolate",
                    outcome.outside_span, cfg.span_l
                );
            }
            match outcome.predictions.quality() {
                Ok(q) => println!("Q={:.4} on {} test samples", q.q, q.n_test),
                Err(_) => println!("{} predictions written", outcome.predictions.y_p.len()),
            }
        }
        Command::Quality(common) => {
            let rows = pipeline::cmd_quality(&common.config())?;
            println!("wrote {} quality rows", rows.len());
        }
        Command::Reproduce(common) => {
            let result = pipeline::cmd_reproduce(&common.config())?;
            for check in &result.checks {
                println!(
                    "[{}] {} = {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.label,
                    check.computed
                );
            }
            for file in &result.files {
                println!("wrote {}", file.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invalid_input() { 2 } else { 1 })
        }
    }
}
