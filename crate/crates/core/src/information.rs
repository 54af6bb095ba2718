//! Entropy statistics of an experiment and selection of the sample count.
//!
//! All integrals use the trapezoid rule on a uniform tensor grid covering the
//! instrument span `[-L, L]^2`. Kernel mass leaking outside the span is not
//! renormalized. Quantities are in nats.

use std::io::Write;

use rayon::prelude::*;

use crate::dataset::{fmt_real, Dataset};
use crate::density::DensityModel;
use crate::error::{Error, Result};
use crate::math::xlogx;
use crate::scattering::{ScatteringFunction, SpanConfig};

/// Smallest admissible number of grid points per axis.
pub const MIN_GRID_POINTS: usize = 129;

/// Sample counts used when no schedule is given; clipped to the dataset size.
pub const DEFAULT_SCHEDULE: [usize; 15] = [1, 2, 3, 4, 6, 8, 11, 16, 22, 32, 45, 64, 90, 128, 180];

/// Uniform tensor grid over the span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    span: SpanConfig,
    points_per_axis: usize,
}

impl QuadratureGrid {
    pub fn new(span: SpanConfig, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < MIN_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be >= {MIN_GRID_POINTS}, got {points_per_axis}"
            )));
        }
        Ok(Self {
            span,
            points_per_axis,
        })
    }

    /// Grid with step at most `sigma/8` (and at least the minimum point count).
    pub fn for_kernel(sf: &ScatteringFunction) -> Self {
        let intervals = (sf.span().width() / (sf.sigma() / 8.0)).ceil() as usize;
        Self {
            span: sf.span(),
            points_per_axis: (intervals + 1).max(MIN_GRID_POINTS),
        }
    }

    pub fn span(&self) -> SpanConfig {
        self.span
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Node spacing `h = 2L / (points - 1)`.
    pub fn step(&self) -> f64 {
        self.span.width() / (self.points_per_axis - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let l = self.span.half_width();
        let h = self.step();
        let last = self.points_per_axis - 1;
        (0..self.points_per_axis)
            .map(|k| if k == last { l } else { -l + k as f64 * h })
            .collect()
    }

    /// Same span, twice the number of intervals.
    pub fn refined(&self) -> Self {
        Self {
            span: self.span,
            points_per_axis: 2 * self.points_per_axis - 1,
        }
    }

    /// Checks that the grid resolves `sf`: same span and `h <= sigma/4`.
    pub fn check_resolves(&self, sf: &ScatteringFunction) -> Result<()> {
        if self.span != sf.span() {
            return Err(Error::InvalidGrid(format!(
                "grid span L={} differs from the instrument span L={}",
                self.span.half_width(),
                sf.span().half_width()
            )));
        }
        if self.step() > sf.sigma() / 4.0 {
            return Err(Error::InvalidGrid(format!(
                "grid step {} exceeds sigma/4 = {} ({} points over 2L = {})",
                self.step(),
                sf.sigma() / 4.0,
                self.points_per_axis,
                self.span.width()
            )));
        }
        Ok(())
    }

    #[inline]
    fn weight(&self, k: usize) -> f64 {
        if k == 0 || k == self.points_per_axis - 1 {
            0.5
        } else {
            1.0
        }
    }

    /// Trapezoid estimate of `-∫∫ f ln f` from density values on the grid
    /// (row-major, `x` slow). `scale` multiplies every value first.
    fn entropy_of_values(&self, values: &[f64], scale: f64) -> f64 {
        let p = self.points_per_axis;
        let rows: Vec<f64> = values
            .par_chunks(p)
            .enumerate()
            .map(|(a, row)| {
                let inner: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(b, &v)| self.weight(b) * xlogx(v * scale))
                    .sum();
                self.weight(a) * inner
            })
            .collect();
        let h = self.step();
        -rows.iter().sum::<f64>() * h * h
    }
}

/// Trapezoid estimate of `-∫∫_{span} f ln f dx dy` for an arbitrary density.
pub fn entropy_quadrature<F>(pdf: F, grid: &QuadratureGrid) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let nodes = grid.nodes();
    let p = nodes.len();
    let mut values = vec![0.0; p * p];
    values
        .par_chunks_mut(p)
        .zip(nodes.par_iter())
        .for_each(|(row, &x)| {
            for (v, &y) in row.iter_mut().zip(&nodes) {
                *v = pdf(x, y);
            }
        });
    if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "density must be finite and non-negative on the grid, found {bad}"
        )));
    }
    Ok(grid.entropy_of_values(&values, 1.0))
}

/// Indeterminacy `H_z`: entropy of the joint estimate relative to the uniform
/// reference density on the span. Always `<= 0` up to quadrature error.
pub fn indeterminacy(model: &DensityModel, grid: &QuadratureGrid) -> Result<f64> {
    grid.check_resolves(model.sf())?;
    let nodes = grid.nodes();
    let values = model.joint_pdf_grid(&nodes, &nodes);
    Ok(grid.entropy_of_values(&values, 1.0) - reference_entropy(grid))
}

/// Experimental information `I = H_z - H_u`.
pub fn experimental_information(model: &DensityModel, grid: &QuadratureGrid) -> Result<f64> {
    Ok(indeterminacy(model, grid)? - model.sf().calibration_entropy())
}

fn reference_entropy(grid: &QuadratureGrid) -> f64 {
    2.0 * grid.span().width().ln()
}

/// Information statistics at one sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoRecord {
    pub n: usize,
    pub log_n: f64,
    /// Experimental information `I(N)`.
    pub info: f64,
    /// `R(N) = log N - I(N)`
    pub redundancy: f64,
    /// `C(N) = log N - 2 I(N)`
    pub cost: f64,
    /// `K(N) = exp(I(N))`
    pub complexity: f64,
}

impl InfoRecord {
    pub fn new(n: usize, info: f64) -> Self {
        let log_n = (n as f64).ln();
        Self {
            n,
            log_n,
            info,
            redundancy: log_n - info,
            cost: log_n - 2.0 * info,
            complexity: info.exp(),
        }
    }
}

/// Information statistics over a growing sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoCurve {
    pub records: Vec<InfoRecord>,
    /// Sample count minimizing the cost, smallest on ties.
    pub n_opt: usize,
    /// Plateau estimate of `I(∞)`.
    pub info_limit: f64,
    /// `exp(info_limit)`
    pub complexity_limit: f64,
}

impl InfoCurve {
    /// Builds the curve summary from records sorted by strictly increasing `n`.
    pub fn from_records(records: Vec<InfoRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidSchedule("no records".into()));
        }
        if records.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::InvalidSchedule(
                "records must have strictly increasing n".into(),
            ));
        }
        let mut best = &records[0];
        for r in &records[1..] {
            if r.cost < best.cost {
                best = r;
            }
        }
        let n_opt = best.n;
        // top decile of the schedule, never fewer than three records
        let tail = records
            .len()
            .div_ceil(10)
            .max(3)
            .min(records.len());
        let info_limit =
            records[records.len() - tail..].iter().map(|r| r.info).sum::<f64>() / tail as f64;
        Ok(Self {
            records,
            n_opt,
            info_limit,
            complexity_limit: info_limit.exp(),
        })
    }

    /// `N,logN,I,R,C,K`, one row per record.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "logN", "I", "R", "C", "K"])?;
        for r in &self.records {
            w.write_record([
                r.n.to_string(),
                fmt_real(r.log_n),
                fmt_real(r.info),
                fmt_real(r.redundancy),
                fmt_real(r.cost),
                fmt_real(r.complexity),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<info curve>", e))?;
        Ok(())
    }

    /// One-line summary `N_opt,I_inf,K_inf`.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N_opt", "I_inf", "K_inf"])?;
        w.write_record([
            self.n_opt.to_string(),
            fmt_real(self.info_limit),
            fmt_real(self.complexity_limit),
        ])?;
        w.flush().map_err(|e| Error::io("<info summary>", e))?;
        Ok(())
    }
}

/// The default schedule clipped to `n_max`, always ending at `n_max`.
pub fn default_schedule(n_max: usize) -> Vec<usize> {
    let mut schedule: Vec<usize> = DEFAULT_SCHEDULE
        .iter()
        .copied()
        .filter(|&n| n < n_max)
        .collect();
    if n_max >= 1 {
        schedule.push(n_max);
    }
    schedule
}

/// Checks that `schedule` is non-empty, strictly increasing and within `1..=len`.
pub fn validate_schedule(schedule: &[usize], len: usize) -> Result<()> {
    let (Some(&first), Some(&last)) = (schedule.first(), schedule.last()) else {
        return Err(Error::InvalidSchedule("schedule is empty".into()));
    };
    if first < 1 {
        return Err(Error::InvalidSchedule("sample counts must be >= 1".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule(format!(
            "schedule must be strictly increasing, got {schedule:?}"
        )));
    }
    if last > len {
        return Err(Error::InvalidSchedule(format!(
            "schedule reaches {last} but the dataset has {len} samples"
        )));
    }
    Ok(())
}

/// Experimental information over nested prefixes of `data`.
///
/// Each record equals `experimental_information` of a model built on the
/// first `n` samples. The grid sum is carried forward from one prefix to the
/// next, in sample order, so every prefix sees the same floating-point
/// accumulation as a fresh evaluation.
pub fn info_curve(
    data: &Dataset,
    sf: &ScatteringFunction,
    grid: &QuadratureGrid,
    schedule: &[usize],
) -> Result<InfoCurve> {
    validate_schedule(schedule, data.len())?;
    grid.check_resolves(sf)?;

    let last = *schedule.last().expect("validated non-empty");
    let model = DensityModel::new(data.prefix(last)?, *sf)?;
    let nodes = grid.nodes();
    let p = nodes.len();
    let y_profiles = model.y_profiles(&nodes);
    let xs = model.xs();
    let h_u = sf.calibration_entropy();
    let h_ref = reference_entropy(grid);

    let mut sums = vec![0.0; p * p];
    let mut done = 0;
    let mut records = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let batch = &xs[done..n];
        sums.par_chunks_mut(p)
            .zip(nodes.par_iter())
            .for_each(|(row, &x)| {
                for (i, &xi) in batch.iter().enumerate() {
                    let gx = sf.channel(x, xi);
                    let profile = &y_profiles[(done + i) * p..(done + i + 1) * p];
                    for (r, q) in row.iter_mut().zip(profile) {
                        *r += gx * q;
                    }
                }
            });
        done = n;
        let h_z = grid.entropy_of_values(&sums, 1.0 / n as f64) - h_ref;
        let info = h_z - h_u;
        if !info.is_finite() {
            return Err(Error::Numerical(format!("non-finite information at n={n}")));
        }
        records.push(InfoRecord::new(n, info));
    }
    InfoCurve::from_records(records)
}
