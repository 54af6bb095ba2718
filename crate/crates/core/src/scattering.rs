//! The instrument's calibrated scattering function.
//!
//! Both channels share one Gaussian kernel width `sigma`, so the
//! two-dimensional kernel factors into `g(x - u_x) * g(y - u_y)`. The kernel
//! is defined on the whole plane; the span only matters for entropy
//! integrals and the uniform reference density.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::LN_SQRT_2PI;

/// Instrument span `(-L, L)` on each channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanConfig {
    half_width: f64,
}

impl SpanConfig {
    pub fn new(half_width: f64) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "span half-width must be finite and > 0, got {half_width}"
            )));
        }
        Ok(Self { half_width })
    }

    /// `L`
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Side length `2L` of one channel's span.
    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    /// Whether `v` lies inside the open interval `(-L, L)`.
    pub fn contains(&self, v: f64) -> bool {
        v > -self.half_width && v < self.half_width
    }

    /// The uniform reference density `1/(2L)^2` over the span.
    pub fn reference_density(&self) -> f64 {
        1.0 / (self.width() * self.width())
    }
}

/// Normal density with mean `u` and standard deviation `sigma`, at `x`.
pub fn gaussian_eval(x: f64, u: f64, sigma: f64) -> Result<f64> {
    if !x.is_finite() || !u.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "non-finite kernel argument (x={x}, u={u})"
        )));
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma must be finite and > 0, got {sigma}"
        )));
    }
    Ok(gaussian(x - u, sigma))
}

#[inline]
pub(crate) fn gaussian(d: f64, sigma: f64) -> f64 {
    let t = d / sigma;
    (-0.5 * t * t).exp() / ((2.0 * PI).sqrt() * sigma)
}

#[inline]
pub(crate) fn ln_gaussian(d: f64, sigma: f64) -> f64 {
    let t = d / sigma;
    -0.5 * t * t - sigma.ln() - LN_SQRT_2PI
}

/// Calibrated Gaussian scattering function with equal, independent channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringFunction {
    sigma: f64,
    span: SpanConfig,
}

impl ScatteringFunction {
    pub fn new(sigma: f64, span: SpanConfig) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and > 0, got {sigma}"
            )));
        }
        if sigma >= span.half_width() {
            return Err(Error::InvalidParameter(format!(
                "sigma ({sigma}) must be smaller than the span half-width ({})",
                span.half_width()
            )));
        }
        Ok(Self { sigma, span })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn span(&self) -> SpanConfig {
        self.span
    }

    /// One channel of the kernel, `g(x - u, sigma)`.
    #[inline]
    pub fn channel(&self, x: f64, u: f64) -> f64 {
        gaussian(x - u, self.sigma)
    }

    #[inline]
    pub fn ln_channel(&self, x: f64, u: f64) -> f64 {
        ln_gaussian(x - u, self.sigma)
    }

    /// `psi(z - u)`, the product of the two channel kernels.
    pub fn eval(&self, z: (f64, f64), u: (f64, f64)) -> Result<f64> {
        if !(z.0.is_finite() && z.1.is_finite() && u.0.is_finite() && u.1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite kernel argument (z={z:?}, u={u:?})"
            )));
        }
        Ok(self.channel(z.0, u.0) * self.channel(z.1, u.1))
    }

    /// Closed-form calibration uncertainty `2 ln(sigma/L) + ln(pi/2) + 1`
    /// in nats. Exact when the kernel mass inside the span is one.
    pub fn calibration_entropy(&self) -> f64 {
        2.0 * (self.sigma / self.span.half_width()).ln() + (PI / 2.0).ln() + 1.0
    }
}
