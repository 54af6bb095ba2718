//! Statistical modeling of a physical law from noisy paired measurements.
//!
//! The instrument's calibrated scattering function serves as the kernel of a
//! density estimate built from measured pairs `(x, y)`. From that estimate the
//! crate derives entropy statistics of the experiment (experimental
//! information, redundancy, complexity, cost), picks a sample count at the
//! minimum of the cost, and extracts the law itself as a conditional-average
//! predictor whose quality is scored against an independent test set.
//!
//! | module | contents |
//! |---|---|
//! | [`scattering`] | Gaussian scattering function and calibration entropy |
//! | [`dataset`] | ordered samples and the dataset CSV format |
//! | [`density`] | joint, marginal and conditional kernel densities |
//! | [`information`] | entropy quadrature, information curve, sample-count selection |
//! | [`predictor`] | conditional-average predictor and predictor quality |
//! | [`generator`] | seeded noisy chaotic benchmark data |
//! | [`pipeline`] | the experiments behind the `expmodel` command |
//!
//! Every entropic quantity is in nats.

pub mod dataset;
pub mod density;
pub mod error;
pub mod generator;
pub mod information;
pub mod math;
pub mod pipeline;
pub mod predictor;
pub mod scattering;

pub use dataset::{Dataset, Sample};
pub use density::DensityModel;
pub use error::{Error, Result};
pub use generator::{generate, logistic_step, GenerationMeta};
pub use information::{
    entropy_quadrature, experimental_information, indeterminacy, info_curve, InfoCurve,
    InfoRecord, QuadratureGrid,
};
pub use predictor::{
    ca_quality_theoretical, predictor_quality, quality_sweep, CaPredictor, Predictions,
    QualityReport,
};
pub use scattering::{gaussian_eval, ScatteringFunction, SpanConfig};
