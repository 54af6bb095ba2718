//! Runs each example in `examples/` as part of the test suite.

#[allow(dead_code)]
#[path = "../examples/scattering_calibration.rs"]
mod scattering_calibration;

#[allow(dead_code)]
#[path = "../examples/density_estimation.rs"]
mod density_estimation;

#[allow(dead_code)]
#[path = "../examples/information_curve.rs"]
mod information_curve;

#[allow(dead_code)]
#[path = "../examples/conditional_average.rs"]
mod conditional_average;

#[allow(dead_code)]
#[path = "../examples/quality_sweep.rs"]
mod quality_sweep;

#[allow(dead_code)]
#[path = "../examples/reproduce_figures.rs"]
mod reproduce_figures;

#[test]
fn scattering_calibration_runs() {
    scattering_calibration::run().expect("example should run");
}

#[test]
fn density_estimation_runs() {
    density_estimation::run().expect("example should run");
}

#[test]
fn information_curve_runs() {
    information_curve::run(2).expect("example should run");
}

#[test]
fn conditional_average_runs() {
    conditional_average::run().expect("example should run");
}

#[test]
fn quality_sweep_runs() {
    quality_sweep::run().expect("example should run");
}

#[test]
fn reproduce_figures_runs() {
    let dir = tempfile::tempdir().unwrap();
    reproduce_figures::run(dir.path().to_path_buf()).expect("example should run");
    for name in ["fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "report.txt"] {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }
}
