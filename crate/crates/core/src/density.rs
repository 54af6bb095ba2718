//! Kernel estimates of the joint, marginal and conditional densities.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::math::softmax_in_place;
use crate::scattering::ScatteringFunction;

/// Kernel density model: the average of the scattering function centred on
/// every sample.
#[derive(Debug, Clone)]
pub struct DensityModel {
    data: Dataset,
    sf: ScatteringFunction,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "density query must be finite, got {values:?}"
        )))
    }
}

impl DensityModel {
    pub fn new(data: Dataset, sf: ScatteringFunction) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let xs = data.xs();
        let ys = data.ys();
        Ok(Self { data, sf, xs, ys })
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn sf(&self) -> &ScatteringFunction {
        &self.sf
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// `f(x, y) = (1/N) Σ psi(z - z_i)`
    pub fn joint_pdf(&self, x: f64, y: f64) -> Result<f64> {
        check_finite(&[x, y])?;
        let sum: f64 = self
            .xs
            .iter()
            .zip(&self.ys)
            .map(|(&xi, &yi)| self.sf.channel(x, xi) * self.sf.channel(y, yi))
            .sum();
        Ok(sum / self.len() as f64)
    }

    /// `f(x) = (1/N) Σ g(x - x_i)`, the analytic full-line marginal.
    pub fn marginal_pdf(&self, x: f64) -> Result<f64> {
        check_finite(&[x])?;
        let sum: f64 = self.xs.iter().map(|&xi| self.sf.channel(x, xi)).sum();
        Ok(sum / self.len() as f64)
    }

    /// `f(y | x) = f(x, y) / f(x)`.
    ///
    /// The `x`-kernels are normalized in the log domain before they weight the
    /// `y`-kernels, so the ratio stays well-defined where both sums underflow.
    pub fn conditional_pdf(&self, y: f64, given_x: f64) -> Result<f64> {
        check_finite(&[y, given_x])?;
        let mut weights: Vec<f64> = self
            .xs
            .iter()
            .map(|&xi| self.sf.ln_channel(given_x, xi))
            .collect();
        softmax_in_place(&mut weights);
        Ok(weights
            .iter()
            .zip(&self.ys)
            .map(|(w, &yi)| w * self.sf.channel(y, yi))
            .sum())
    }

    /// Joint density on the tensor grid `x_nodes × y_nodes`, row-major with
    /// `x` as the slow index.
    ///
    /// Uses the kernel's separability: each row is `Σ_i g(x_a - x_i) g(y - y_i)`,
    /// accumulated over samples in dataset order.
    pub fn joint_pdf_grid(&self, x_nodes: &[f64], y_nodes: &[f64]) -> Vec<f64> {
        let ny = y_nodes.len();
        let y_profiles = self.y_profiles(y_nodes);
        let norm = 1.0 / self.len() as f64;
        let mut out = vec![0.0; x_nodes.len() * ny];
        out.par_chunks_mut(ny)
            .zip(x_nodes.par_iter())
            .for_each(|(row, &x)| {
                for (i, &xi) in self.xs.iter().enumerate() {
                    let gx = self.sf.channel(x, xi);
                    let profile = &y_profiles[i * ny..(i + 1) * ny];
                    for (r, p) in row.iter_mut().zip(profile) {
                        *r += gx * p;
                    }
                }
                row.iter_mut().for_each(|r| *r *= norm);
            });
        out
    }

    /// `g(y_b - y_i)` for every sample `i` and node `b`, sample-major.
    pub(crate) fn y_profiles(&self, y_nodes: &[f64]) -> Vec<f64> {
        self.ys
            .iter()
            .flat_map(|&yi| y_nodes.iter().map(move |&y| (y, yi)))
            .map(|(y, yi)| self.sf.channel(y, yi))
            .collect()
    }
}
