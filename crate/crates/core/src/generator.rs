//! Seeded generator of noisy chaotic benchmark data.
//!
//! The clean law is the Ulam map `u' = 1 - 2u^2` on `[-1, 1]`. Successive
//! iterates form the pair `(u_i, u_{i+1})`, both scaled by the channel gain,
//! and each coordinate receives independent Gaussian measurement noise.
//!
//! Random draws come from three ChaCha20 substreams of one seed: stream 0 for
//! the initial condition, 1 for x-noise and 2 for y-noise. Each stream is
//! consumed strictly in sample order, so a longer run extends a shorter one.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::dataset::{Dataset, Sample};
use crate::error::{Error, Result};

pub const MAP_NAME: &str = "ulam";
pub const PRNG_NAME: &str = "chacha20";

/// Map iterations discarded before the first recorded sample.
pub const TRANSIENT: usize = 100;

/// Default channel gain: the clean signal covers `[-8, 8]`.
pub const DEFAULT_GAIN: f64 = 8.0;

const STREAM_INITIAL: u64 = 0;
const STREAM_NOISE_X: u64 = 1;
const STREAM_NOISE_Y: u64 = 2;

/// One step of the Ulam map, `1 - 2x^2`.
pub fn logistic_step(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    Ok(1.0 - 2.0 * x * x)
}

/// Everything needed to regenerate a dataset bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationMeta {
    pub seed: u64,
    /// Standard deviation of the noise added to each coordinate.
    pub sigma_noise: f64,
    pub n: usize,
    pub map_name: String,
    /// Normalized starting point in `[-1, 1]`; drawn from the seed when `None`.
    pub initial_x: Option<f64>,
    pub prng_name: String,
    /// Channel gain applied to the normalized map values.
    pub gain: f64,
}

impl GenerationMeta {
    pub fn new(seed: u64, sigma_noise: f64, n: usize) -> Self {
        Self {
            seed,
            sigma_noise,
            n,
            map_name: MAP_NAME.to_string(),
            initial_x: None,
            prng_name: PRNG_NAME.to_string(),
            gain: DEFAULT_GAIN,
        }
    }

    pub fn with_gain(mut self, gain: f64) -> Self {
        self.gain = gain;
        self
    }

    pub fn with_initial_x(mut self, x: f64) -> Self {
        self.initial_x = Some(x);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma_noise.is_finite() || self.sigma_noise < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be finite and >= 0, got {}",
                self.sigma_noise
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("sample count n must be >= 1".into()));
        }
        if !self.gain.is_finite() || self.gain <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gain must be finite and > 0, got {}",
                self.gain
            )));
        }
        if self.map_name != MAP_NAME {
            return Err(Error::InvalidParameter(format!(
                "unsupported map {:?}",
                self.map_name
            )));
        }
        if self.prng_name != PRNG_NAME {
            return Err(Error::InvalidParameter(format!(
                "unsupported prng {:?}",
                self.prng_name
            )));
        }
        if let Some(x0) = self.initial_x {
            if !(-1.0..=1.0).contains(&x0) {
                return Err(Error::InvalidParameter(format!(
                    "initial_x must lie in [-1, 1], got {x0}"
                )));
            }
        }
        Ok(())
    }

    /// The noise-free law in signal units, `y_o = A (1 - 2 (x_o / A)^2)`.
    pub fn law(&self, x: f64) -> f64 {
        let u = x / self.gain;
        self.gain * (1.0 - 2.0 * u * u)
    }

    /// `# seed=<s> sigma=<σ> map=ulam prng=<name> n=<n> gain=<A>[ x0=<x0>]`
    pub fn comment_line(&self) -> String {
        let mut line = format!(
            "# seed={} sigma={} map={} prng={} n={} gain={}",
            self.seed, self.sigma_noise, self.map_name, self.prng_name, self.n, self.gain
        );
        if let Some(x0) = self.initial_x {
            line.push_str(&format!(" x0={x0:e}"));
        }
        line
    }

    /// Parses the body of a comment line (without the leading `#`).
    /// Returns `None` unless at least `seed`, `sigma` and `n` are present.
    pub fn parse_comment(comment: &str) -> Option<Self> {
        let mut seed = None;
        let mut sigma = None;
        let mut n = None;
        let mut meta = GenerationMeta::new(0, 0.0, 0);
        for token in comment.split_whitespace() {
            let Some((key, value)) = token.split_once('=') else {
                continue;
            };
            match key {
                "seed" => seed = value.parse().ok(),
                "sigma" => sigma = value.parse().ok(),
                "n" => n = value.parse().ok(),
                "map" => meta.map_name = value.to_string(),
                "prng" => meta.prng_name = value.to_string(),
                "gain" => meta.gain = value.parse().ok()?,
                "x0" => meta.initial_x = Some(value.parse().ok()?),
                _ => {}
            }
        }
        meta.seed = seed?;
        meta.sigma_noise = sigma?;
        meta.n = n?;
        Some(meta)
    }
}

/// Standard normal deviates by the Box–Muller transform, both outputs of each
/// pair used in turn.
struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    fn new(seed: u64, stream: u64) -> Self {
        Self {
            rng: substream(seed, stream),
            spare: None,
        }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U lies in (0, 1], so the logarithm is finite
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

fn substream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generates the noisy dataset described by `meta`.
///
/// The returned dataset carries the clean values and a copy of `meta` with
/// the realized `initial_x` filled in.
pub fn generate(meta: &GenerationMeta) -> Result<Dataset> {
    meta.validate()?;
    let x0 = match meta.initial_x {
        Some(x0) => x0,
        None => substream(meta.seed, STREAM_INITIAL).random_range(-0.99..0.99),
    };

    let mut u = x0;
    for _ in 0..TRANSIENT {
        u = logistic_step(u)?;
    }

    let mut noise_x = NormalStream::new(meta.seed, STREAM_NOISE_X);
    let mut noise_y = NormalStream::new(meta.seed, STREAM_NOISE_Y);
    let mut samples = Vec::with_capacity(meta.n);
    let mut clean = Vec::with_capacity(meta.n);
    for _ in 0..meta.n {
        let next = logistic_step(u)?;
        let xo = meta.gain * u;
        let yo = meta.gain * next;
        let x = xo + meta.sigma_noise * noise_x.next();
        let y = yo + meta.sigma_noise * noise_y.next();
        samples.push(Sample::new(x, y)?);
        clean.push(Sample { x: xo, y: yo });
        u = next;
    }

    let realized = GenerationMeta {
        initial_x: Some(x0),
        ..meta.clone()
    };
    Ok(Dataset::new(samples)?.with_clean(clean)?.with_meta(realized))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_reference_points() {
        assert_eq!(logistic_step(0.0).unwrap(), 1.0);
        assert_eq!(logistic_step(1.0).unwrap(), -1.0);
        assert_eq!(logistic_step(-1.0).unwrap(), -1.0);
        assert!(logistic_step(std::f64::consts::FRAC_1_SQRT_2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn map_rejects_out_of_domain() {
        assert!(matches!(logistic_step(1.0 + 1e-12), Err(Error::OutOfDomain(_))));
        assert!(matches!(logistic_step(f64::NAN), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn noise_free_pairs_follow_the_map_exactly() {
        let meta = GenerationMeta::new(11, 0.0, 500).with_gain(1.0);
        let d = generate(&meta).unwrap();
        for s in d.samples() {
            assert_eq!(s.y, 1.0 - 2.0 * s.x * s.x);
        }
    }

    #[test]
    fn noise_free_pairs_follow_the_scaled_law() {
        let meta = GenerationMeta::new(12, 0.0, 500);
        let d = generate(&meta).unwrap();
        for s in d.samples() {
            assert!((s.y - meta.law(s.x)).abs() < 1e-12 * meta.gain);
        }
    }

    #[test]
    fn consecutive_pairs_chain() {
        let d = generate(&GenerationMeta::new(5, 0.2, 50)).unwrap();
        let clean = d.clean().unwrap();
        for w in clean.windows(2) {
            assert_eq!(w[0].y, w[1].x);
        }
        assert!(clean.iter().all(|c| c.x.abs() <= 8.0 && c.y.abs() <= 8.0));
    }

    #[test]
    fn noise_has_requested_spread() {
        for seed in [1u64, 99] {
            let d = generate(&GenerationMeta::new(seed, 0.2, 10_000)).unwrap();
            let noise: Vec<f64> = d
                .samples()
                .iter()
                .zip(d.clean().unwrap())
                .map(|(s, c)| s.x - c.x)
                .collect();
            let n = noise.len() as f64;
            let mean = noise.iter().sum::<f64>() / n;
            let sd = (noise.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            assert!((sd - 0.2).abs() < 0.01, "seed {seed}: sd {sd}");
            assert!(mean.abs() < 3.0 * 0.2 / n.sqrt(), "seed {seed}: mean {mean}");
        }
    }

    #[test]
    fn longer_runs_extend_shorter_ones() {
        let short = generate(&GenerationMeta::new(8, 0.2, 20)).unwrap();
        let long = generate(&GenerationMeta::new(8, 0.2, 200)).unwrap();
        assert_eq!(short.samples(), &long.samples()[..20]);
        // odd length leaves a cached Box–Muller spare behind
        let odd = generate(&GenerationMeta::new(8, 0.2, 21)).unwrap();
        assert_eq!(odd.samples(), &long.samples()[..21]);
    }

    #[test]
    fn same_meta_gives_identical_bytes() {
        let meta = GenerationMeta::new(42, 0.2, 64);
        let mut a = Vec::new();
        let mut b = Vec::new();
        generate(&meta).unwrap().write_csv(&mut a).unwrap();
        generate(&meta).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# seed=42 sigma=0.2 map=ulam prng=chacha20 n=64 gain=8 x0="));
    }

    #[test]
    fn seeds_give_different_data() {
        let a = generate(&GenerationMeta::new(1, 0.2, 10)).unwrap();
        let b = generate(&GenerationMeta::new(2, 0.2, 10)).unwrap();
        assert_ne!(a.samples(), b.samples());
    }

    #[test]
    fn explicit_initial_condition_is_honored() {
        let drawn = generate(&GenerationMeta::new(3, 0.2, 30)).unwrap();
        let x0 = drawn.meta().unwrap().initial_x.unwrap();
        assert!(x0 > -0.99 && x0 < 0.99);
        let replay = generate(&GenerationMeta::new(3, 0.2, 30).with_initial_x(x0)).unwrap();
        assert_eq!(drawn.samples(), replay.samples());
    }

    #[test]
    fn comment_line_round_trips() {
        let meta = generate(&GenerationMeta::new(9, 0.4, 3)).unwrap().meta().unwrap().clone();
        let parsed = GenerationMeta::parse_comment(&meta.comment_line()[1..]).unwrap();
        assert_eq!(parsed, meta);
    }

    #[test]
    fn invalid_meta_is_rejected() {
        assert!(generate(&GenerationMeta::new(1, 0.2, 0)).is_err());
        assert!(generate(&GenerationMeta::new(1, -0.1, 5)).is_err());
        assert!(generate(&GenerationMeta::new(1, 0.2, 5).with_gain(0.0)).is_err());
        assert!(generate(&GenerationMeta::new(1, 0.2, 5).with_initial_x(1.5)).is_err());
        let mut other_map = GenerationMeta::new(1, 0.2, 5);
        other_map.map_name = "tent".into();
        assert!(matches!(generate(&other_map), Err(Error::InvalidParameter(_))));
    }
}
