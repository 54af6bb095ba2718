//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]` / `[FAIL]` line. Run with
//!
//! ```text
//! cargo test -p expmodel --test acceptance -- --nocapture
//! ```
//!
//! Criteria 1–4 share one sigma × seed sweep and one quality sweep at the
//! default configuration, computed once.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use expmodel::generator::generate;
use expmodel::information::default_schedule;
use expmodel::pipeline::{
    cmd_reproduce, experiment_seeds, quality_runs, quality_spread, sigma_sweep, QualityRow,
    RunConfig, SweepRun, SIGMA_SWEEP,
};
use expmodel::{
    entropy_quadrature, experimental_information, info_curve, predictor_quality, CaPredictor,
    Dataset, DensityModel, QuadratureGrid, ScatteringFunction, SpanConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Shared {
    sweep: Vec<SweepRun>,
    quality: Vec<QualityRow>,
    /// Wall time of the slowest single-seed information curve at the default sigma.
    slowest_seed: Duration,
}

fn shared() -> &'static Shared {
    static CELL: OnceLock<Shared> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = RunConfig::default();
        let mut slowest_seed = Duration::ZERO;
        for seed in experiment_seeds(cfg.seed) {
            let single = RunConfig { seed, ..cfg.clone() };
            let start = Instant::now();
            let sf = single.sf().unwrap();
            let grid = single.grid(&sf).unwrap();
            let data = generate(&single.meta(seed, single.sigma)).unwrap();
            info_curve(&data, &sf, &grid, &default_schedule(data.len())).unwrap();
            slowest_seed = slowest_seed.max(start.elapsed());
        }
        Shared {
            sweep: sigma_sweep(&cfg, &SIGMA_SWEEP).unwrap(),
            quality: quality_runs(&cfg).unwrap(),
            slowest_seed,
        }
    })
}

fn main_runs() -> Vec<&'static SweepRun> {
    let sigma = RunConfig::default().sigma;
    shared().sweep.iter().filter(|r| r.sigma == sigma).collect()
}

fn report(name: &str, pass: bool, detail: String) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

#[test]
fn criterion_1_information_plateau() {
    let runs = main_runs();
    let mut ok = 0;
    let mut parts = Vec::new();
    for run in &runs {
        let last = run.curve.records.last().unwrap();
        let k = run.curve.complexity_limit;
        ok += usize::from((3.3..=4.3).contains(&last.info) && (30.0..=60.0).contains(&k));
        parts.push(format!("seed {} I({})={:.3} K_inf={:.1}", run.seed, last.n, last.info, k));
    }
    let secs = shared().slowest_seed.as_secs_f64();
    let pass = ok >= 2 && secs <= 60.0;
    report(
        "criterion 1 (I(200) in [3.3,4.3], K_inf in [30,60], >=2/3 seeds, <=60 s/seed)",
        pass,
        format!("{ok}/3 seeds; {}; slowest seed {secs:.2} s", parts.join("; ")),
    );
}

#[test]
fn criterion_2_optimal_sample_count() {
    let runs = main_runs();
    let mut ok = 0;
    let mut parts = Vec::new();
    for run in &runs {
        let (n, k) = (run.curve.n_opt, run.curve.complexity_limit);
        ok += usize::from((15..=64).contains(&n) && n as f64 <= k + 10.0);
        parts.push(format!("seed {} N_opt={n} K_inf+10={:.1}", run.seed, k + 10.0));
    }
    report(
        "criterion 2 (N_opt in [15,64] and <= K_inf+10, >=2/3 seeds)",
        ok >= 2,
        format!("{ok}/3 seeds; {}", parts.join("; ")),
    );
}

#[test]
fn criterion_3_sigma_monotonicity() {
    let mut pass = true;
    let mut parts = Vec::new();
    for seed in experiment_seeds(RunConfig::default().seed) {
        let mut runs: Vec<&SweepRun> = shared().sweep.iter().filter(|r| r.seed == seed).collect();
        runs.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
        let info: Vec<f64> = runs.iter().map(|r| r.curve.info_limit).collect();
        let n_opt: Vec<usize> = runs.iter().map(|r| r.curve.n_opt).collect();
        pass &= info.windows(2).all(|w| w[0] > w[1]) && n_opt.windows(2).all(|w| w[0] >= w[1]);
        parts.push(format!("seed {seed} I_inf={info:.3?} N_opt={n_opt:?}"));
    }
    report(
        "criterion 3 (I_inf decreasing and N_opt non-increasing in sigma, every seed)",
        pass,
        parts.join("; "),
    );
}

#[test]
fn criterion_4_predictor_quality() {
    let quality = &shared().quality;
    let q32: Vec<f64> = experiment_seeds(RunConfig::default().seed)
        .into_iter()
        .map(|s| quality.iter().find(|r| r.0 == s && r.1 == 32).map_or(f64::NAN, |r| r.2.q))
        .collect();
    let spread = quality_spread(quality, 50).unwrap_or(f64::INFINITY);
    let pass = q32.iter().all(|&q| q >= 0.98) && spread <= 0.02;
    report(
        "criterion 4 (Q(32) >= 0.98 every seed, spread at N>=50 <= 0.02)",
        pass,
        format!("Q(32)={q32:.4?} spread={spread:.4}"),
    );
}

#[test]
fn criterion_5_exact_case_properties() {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("    {} {name}: {detail}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    // information bounds on every default-sigma curve
    for run in main_runs() {
        let first = &run.curve.records[0];
        check(
            &format!("seed {} I(1) = 0", run.seed),
            first.n == 1 && first.info.abs() <= 1e-2,
            format!("I(1)={:.2e}", first.info),
        );
        let worst = run.curve.records.iter().map(|r| r.info - r.log_n).fold(f64::MIN, f64::max);
        check(
            &format!("seed {} I(N) <= log N", run.seed),
            worst <= 5e-2,
            format!("max I-logN={worst:.3e}"),
        );
    }

    // non-overlapping samples
    let narrow = ScatteringFunction::new(0.2, SpanConfig::new(2.0).unwrap()).unwrap();
    let narrow_grid = QuadratureGrid::for_kernel(&narrow);
    let four = Dataset::from_pairs([(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]).unwrap();
    let i4 = experimental_information(&DensityModel::new(four, narrow).unwrap(), &narrow_grid).unwrap();
    check(
        "4 separated samples carry log 4",
        (i4 - 4f64.ln()).abs() <= 0.02,
        format!("I={i4:.5} log4={:.5}", 4f64.ln()),
    );

    // Gaussian entropy and calibration entropy
    let h = entropy_quadrature(|x, y| narrow.eval((x, y), (0.0, 0.0)).unwrap(), &narrow_grid).unwrap();
    check("kernel entropy at origin", (h - (-0.38083)).abs() <= 1e-3, format!("H={h:.6}"));
    let h_u = h - 2.0 * narrow.span().width().ln();
    check(
        "calibration entropy matches quadrature",
        (narrow.calibration_entropy() - h_u).abs() <= 1e-3,
        format!("closed={:.6} quadrature={h_u:.6}", narrow.calibration_entropy()),
    );

    // weights and prediction bounds
    let cfg = RunConfig::default();
    let sf = cfg.sf().unwrap();
    let data = generate(&cfg.meta(cfg.seed, cfg.sigma)).unwrap();
    let predictor = CaPredictor::new(&data, sf).unwrap();
    let ys = data.ys();
    let (lo, hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let l = cfg.span_l;
    let queries: Vec<f64> = (0..998)
        .map(|_| rng.random_range(-10.0 * l..10.0 * l))
        .chain([-10.0 * l, 10.0 * l])
        .collect();
    let mut worst_sum = 0.0f64;
    let mut in_bounds = true;
    for &x in &queries {
        let w = predictor.weights(x).unwrap();
        worst_sum = worst_sum.max((w.iter().sum::<f64>() - 1.0).abs());
        let y = predictor.predict(x).unwrap();
        in_bounds &= lo <= y && y <= hi;
    }
    check("weights sum to 1", worst_sum <= 1e-12, format!("max |sum-1|={worst_sum:.1e} over 1000 x"));
    check("predictions within [min y, max y]", in_bounds, "1000 x".into());

    // quality reference cases
    let y = [0.3, -1.2, 2.0, 0.7];
    let exact = predictor_quality(&y, &y).unwrap().q;
    check("exact prediction Q = 1", exact == 1.0, format!("Q={exact}"));
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let flat = predictor_quality(&y, &[mean; 4]).unwrap().q;
    check("mean-constant prediction Q = 0", flat.abs() <= 1e-12, format!("Q={flat:.1e}"));
    let biased = predictor_quality(&[0.0, 1.0], &[10.0, 11.0]).unwrap().q;
    check("mean-offset prediction Q = -199", biased == -199.0, format!("Q={biased}"));

    // model-quadrature identities for the conditional average
    let basic = data.prefix(50).unwrap();
    let m = model_moments(&basic, sf);
    check(
        "m(y_p) = m(y) under the model",
        (m.0 - m.1).abs() <= 1e-3,
        format!("m(y)={:.6} m(y_p)={:.6}", m.0, m.1),
    );
    check(
        "Cov(y, y_p) = Var(y_p) under the model",
        (m.4 - m.3).abs() <= 1e-3 * m.2,
        format!("Cov={:.6} Var(y_p)={:.6} Var(y)={:.4}", m.4, m.3, m.2),
    );

    // quadrature convergence
    let grid = cfg.grid(&sf).unwrap();
    let model = DensityModel::new(data, sf).unwrap();
    let coarse = experimental_information(&model, &grid).unwrap();
    let fine = experimental_information(&model, &grid.refined()).unwrap();
    check(
        "doubling the grid changes I(200) by <= 1e-3",
        (coarse - fine).abs() <= 1e-3,
        format!("{} pts {coarse:.6}, {} pts {fine:.6}", grid.points_per_axis(), grid.refined().points_per_axis()),
    );

    report(
        "criterion 5 (exact-case properties)",
        failures.is_empty(),
        if failures.is_empty() { "all sub-checks hold".into() } else { failures.join(", ") },
    );
}

/// `(m(y), m(y_p), Var(y), Var(y_p), Cov(y, y_p))` under the model density,
/// by trapezoid quadrature over `[-L - 8 sigma, L + 8 sigma]²`.
fn model_moments(data: &Dataset, sf: ScatteringFunction) -> (f64, f64, f64, f64, f64) {
    let model = DensityModel::new(data.clone(), sf).unwrap();
    let predictor = CaPredictor::new(data, sf).unwrap();
    let reach = sf.span().half_width() + 8.0 * sf.sigma();
    let steps = (2.0 * reach / (sf.sigma() / 8.0)).ceil() as usize;
    let h = 2.0 * reach / steps as f64;
    let nodes: Vec<f64> = (0..=steps).map(|k| -reach + k as f64 * h).collect();
    let weight = |k: usize| if k == 0 || k == steps { 0.5 * h } else { h };
    let preds = predictor.predict_many(&nodes).unwrap();
    let f = model.joint_pdf_grid(&nodes, &nodes);
    let p = nodes.len();
    let mut s = [0.0; 5];
    for a in 0..p {
        for b in 0..p {
            let w = weight(a) * weight(b) * f[a * p + b];
            let (y, yp) = (nodes[b], preds[a]);
            s[0] += w * y;
            s[1] += w * yp;
            s[2] += w * y * y;
            s[3] += w * yp * yp;
            s[4] += w * y * yp;
        }
    }
    (s[0], s[1], s[2] - s[0] * s[0], s[3] - s[1] * s[1], s[4] - s[0] * s[1])
}

#[test]
fn criterion_6_determinism() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let cfg = RunConfig { out_dir: dir.path().to_path_buf(), ..RunConfig::default() };
            let repro = cmd_reproduce(&cfg).unwrap();
            let files: Vec<(String, Vec<u8>)> = repro
                .files
                .iter()
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
                .collect();
            (dir, files)
        })
        .collect();
    let (a, b) = (&runs[0].1, &runs[1].1);
    let differing: Vec<&str> = a
        .iter()
        .zip(b)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let pass = a.len() == b.len() && a.len() >= 4 && differing.is_empty();
    report(
        "criterion 6 (reproduce twice gives byte-identical CSVs)",
        pass,
        format!("{} CSVs compared, differing: {differing:?}", a.len()),
    );
}
