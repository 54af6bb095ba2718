//! Conditional-average predictor and the predictor-quality statistic.
//!
//! The prediction at `x` is the kernel-weighted average of the sample outputs,
//! `y_p(x) = Σ y_i C_i(x)`, with similarity weights
//! `C_i(x) = g(x - x_i) / Σ_j g(x - x_j)`.

use std::io::Write;

use rayon::prelude::*;

use crate::dataset::{fmt_real, Dataset};
use crate::error::{Error, Result};
use crate::information::validate_schedule;
use crate::math::softmax_in_place;
use crate::scattering::ScatteringFunction;

#[derive(Debug, Clone)]
pub struct CaPredictor {
    sf: ScatteringFunction,
    xs: Vec<f64>,
    ys: Vec<f64>,
    y_min: f64,
    y_max: f64,
}

impl CaPredictor {
    pub fn new(data: &Dataset, sf: ScatteringFunction) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let ys = data.ys();
        let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let y_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            sf,
            xs: data.xs(),
            ys,
            y_min,
            y_max,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn sf(&self) -> &ScatteringFunction {
        &self.sf
    }

    /// Similarity weights `C_i(x)`; they sum to one and lie in `[0, 1]`.
    pub fn weights(&self, x: f64) -> Result<Vec<f64>> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("query x must be finite, got {x}")));
        }
        let inv = 1.0 / (2.0 * self.sf.sigma() * self.sf.sigma());
        let mut w: Vec<f64> = self
            .xs
            .iter()
            .map(|&xi| -(x - xi) * (x - xi) * inv)
            .collect();
        softmax_in_place(&mut w);
        Ok(w)
    }

    /// Conditional average `y_p(x)`.
    pub fn predict(&self, x: f64) -> Result<f64> {
        let w = self.weights(x)?;
        // offsets from the dominant sample keep a constant output exact
        let k = w
            .iter()
            .enumerate()
            .fold(0, |best, (i, &wi)| if wi > w[best] { i } else { best });
        let base = self.ys[k];
        let shift: f64 = w.iter().zip(&self.ys).map(|(wi, yi)| wi * (yi - base)).sum();
        Ok((base + shift).clamp(self.y_min, self.y_max))
    }

    pub fn predict_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.par_iter().map(|&x| self.predict(x)).collect()
    }
}

/// Moments of true and predicted outputs and the resulting quality `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub q: f64,
    pub mean_true: f64,
    pub mean_pred: f64,
    pub var_true: f64,
    pub var_pred: f64,
    pub cov: f64,
    /// `E[(y - y_p)^2]`
    pub mse: f64,
    pub n_test: usize,
}

impl QualityReport {
    /// `Q` recomputed from covariance and mean offset:
    /// `(2 Cov - (m_y - m_p)^2) / (Var y + Var y_p)`.
    pub fn decomposed_q(&self) -> f64 {
        let d = self.mean_true - self.mean_pred;
        (2.0 * self.cov - d * d) / (self.var_true + self.var_pred)
    }
}

/// Predictor quality `Q = 1 - E[(y - y_p)^2] / (Var y + Var y_p)` with
/// population (divide-by-n) moments.
pub fn predictor_quality(y_true: &[f64], y_pred: &[f64]) -> Result<QualityReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::ShapeMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    let n = y_true.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "quality needs at least 2 test values, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_true = y_true.iter().sum::<f64>() / nf;
    let mean_pred = y_pred.iter().sum::<f64>() / nf;
    let (mut var_true, mut var_pred, mut cov, mut mse) = (0.0, 0.0, 0.0, 0.0);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        let dt = t - mean_true;
        let dp = p - mean_pred;
        var_true += dt * dt;
        var_pred += dp * dp;
        cov += dt * dp;
        mse += (t - p) * (t - p);
    }
    var_true /= nf;
    var_pred /= nf;
    cov /= nf;
    mse /= nf;
    let denom = var_true + var_pred;
    if denom == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(QualityReport {
        q: 1.0 - mse / denom,
        mean_true,
        mean_pred,
        var_true,
        var_pred,
        cov,
        mse,
        n_test: n,
    })
}

/// Quality of an exact conditional average, `2 Var(y_p) / (Var y + Var y_p)`.
pub fn ca_quality_theoretical(var_true: f64, var_pred: f64) -> Result<f64> {
    if !(var_true >= 0.0 && var_pred >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "variances must be >= 0, got {var_true} and {var_pred}"
        )));
    }
    let denom = var_true + var_pred;
    if denom == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(2.0 * var_pred / denom)
}

/// Predictions of a basic-set predictor on a test set.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub x_t: Vec<f64>,
    pub y_t: Vec<f64>,
    pub y_p: Vec<f64>,
}

impl Predictions {
    pub fn on(predictor: &CaPredictor, test: &Dataset) -> Result<Self> {
        let x_t = test.xs();
        let y_p = predictor.predict_many(&x_t)?;
        Ok(Self {
            x_t,
            y_t: test.ys(),
            y_p,
        })
    }

    pub fn quality(&self) -> Result<QualityReport> {
        predictor_quality(&self.y_t, &self.y_p)
    }

    /// `x_t,y_t,y_p,err` with `err = y_p - y_t`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x_t", "y_t", "y_p", "err"])?;
        for ((x, t), p) in self.x_t.iter().zip(&self.y_t).zip(&self.y_p) {
            w.write_record([fmt_real(*x), fmt_real(*t), fmt_real(*p), fmt_real(p - t)])?;
        }
        w.flush().map_err(|e| Error::io("<predictions>", e))?;
        Ok(())
    }
}

/// Quality of predictors built on nested prefixes of `basic`, each evaluated
/// on the whole `test` set. Output order follows `schedule`.
pub fn quality_sweep(
    basic: &Dataset,
    test: &Dataset,
    sf: &ScatteringFunction,
    schedule: &[usize],
) -> Result<Vec<(usize, QualityReport)>> {
    validate_schedule(schedule, basic.len())?;
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    schedule
        .par_iter()
        .map(|&n| {
            let predictor = CaPredictor::new(&basic.prefix(n)?, *sf)?;
            let report = Predictions::on(&predictor, test)?.quality()?;
            Ok((n, report))
        })
        .collect()
}

/// Writes `N,seed,Q,var_y,var_yp,cov,mse` rows.
pub fn write_quality_csv<W: Write>(rows: &[(u64, usize, QualityReport)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "seed", "Q", "var_y", "var_yp", "cov", "mse"])?;
    for (seed, n, r) in rows {
        w.write_record([
            n.to_string(),
            seed.to_string(),
            fmt_real(r.q),
            fmt_real(r.var_true),
            fmt_real(r.var_pred),
            fmt_real(r.cov),
            fmt_real(r.mse),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<quality>", e))?;
    Ok(())
}
