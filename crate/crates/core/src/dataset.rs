//! Ordered measurement samples and the dataset CSV format.
//!
//! Format: optional leading `# key=value ...` comment line, then the header
//! `i,x,y` or `i,x,y,x_o,y_o`, then one row per sample in insertion order.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::generator::GenerationMeta;

/// One measured pair `z = (x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
}

impl Sample {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample coordinates must be finite, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }
}

impl From<Sample> for (f64, f64) {
    fn from(s: Sample) -> Self {
        (s.x, s.y)
    }
}

/// Samples in measurement order, with optional noise-free values and
/// generation metadata.
///
/// Order matters: information curves and quality sweeps use nested prefixes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    samples: Vec<Sample>,
    clean: Option<Vec<Sample>>,
    meta: Option<GenerationMeta>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        for s in &samples {
            Sample::new(s.x, s.y)?;
        }
        Ok(Self {
            samples,
            clean: None,
            meta: None,
        })
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let samples = pairs
            .into_iter()
            .map(|(x, y)| Sample::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(samples).expect("samples validated"))
    }

    /// Attaches the noise-free values, one per sample.
    pub fn with_clean(mut self, clean: Vec<Sample>) -> Result<Self> {
        if clean.len() != self.samples.len() {
            return Err(Error::ShapeMismatch {
                left: self.samples.len(),
                right: clean.len(),
            });
        }
        self.clean = Some(clean);
        Ok(self)
    }

    pub fn with_meta(mut self, meta: GenerationMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn clean(&self) -> Option<&[Sample]> {
        self.clean.as_deref()
    }

    pub fn meta(&self) -> Option<&GenerationMeta> {
        self.meta.as_ref()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.y).collect()
    }

    /// The first `n` samples (and clean values), keeping the metadata.
    pub fn prefix(&self, n: usize) -> Result<Dataset> {
        if n > self.len() {
            return Err(Error::InvalidParameter(format!(
                "prefix of {n} samples requested from a dataset of {}",
                self.len()
            )));
        }
        Ok(Dataset {
            samples: self.samples[..n].to_vec(),
            clean: self.clean.as_ref().map(|c| c[..n].to_vec()),
            meta: self.meta.clone(),
        })
    }

    /// Appends the samples of `other`; clean values survive only if both sides have them.
    pub fn concat(&self, other: &Dataset) -> Dataset {
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples);
        let clean = match (&self.clean, &other.clean) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Dataset {
            samples,
            clean,
            meta: None,
        }
    }

    /// Writes the dataset CSV, preceded by the metadata comment when present.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        if let Some(meta) = &self.meta {
            writeln!(out, "{}", meta.comment_line()).map_err(|e| Error::io("<dataset>", e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        match &self.clean {
            Some(clean) => {
                w.write_record(["i", "x", "y", "x_o", "y_o"])?;
                for (i, (s, c)) in self.samples.iter().zip(clean).enumerate() {
                    w.write_record([
                        (i + 1).to_string(),
                        fmt_real(s.x),
                        fmt_real(s.y),
                        fmt_real(c.x),
                        fmt_real(c.y),
                    ])?;
                }
            }
            None => {
                w.write_record(["i", "x", "y"])?;
                for (i, s) in self.samples.iter().enumerate() {
                    w.write_record([(i + 1).to_string(), fmt_real(s.x), fmt_real(s.y)])?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("<dataset>", e))?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text, path)
    }

    /// Parses dataset CSV text. `origin` is only used in error messages.
    pub fn parse_csv(text: &str, origin: impl AsRef<Path>) -> Result<Dataset> {
        let origin = origin.as_ref();
        let malformed = |reason: String| Error::MalformedCsv {
            path: origin.to_path_buf(),
            reason,
        };

        let mut meta = None;
        let mut body = String::with_capacity(text.len());
        for line in text.lines() {
            if let Some(comment) = line.strip_prefix('#') {
                if meta.is_none() {
                    meta = GenerationMeta::parse_comment(comment);
                }
            } else if !line.trim().is_empty() {
                body.push_str(line);
                body.push('\n');
            }
        }
        if body.is_empty() {
            return Ok(Dataset {
                meta,
                ..Dataset::default()
            });
        }

        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        let headers = reader.headers()?.clone();
        let column = |name: &str| headers.iter().position(|h| h == name);
        let (cx, cy) = match (column("x"), column("y")) {
            (Some(cx), Some(cy)) => (cx, cy),
            _ => return Err(malformed(format!("header must contain x and y, got {headers:?}"))),
        };
        let clean_cols = match (column("x_o"), column("y_o")) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => return Err(malformed("x_o and y_o must appear together".into())),
        };

        let mut samples = Vec::new();
        let mut clean = clean_cols.map(|_| Vec::new());
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let field = |c: usize| -> Result<f64> {
                let raw = record
                    .get(c)
                    .ok_or_else(|| malformed(format!("row {}: missing column {c}", row + 1)))?;
                raw.parse::<f64>()
                    .map_err(|_| malformed(format!("row {}: {raw:?} is not a number", row + 1)))
            };
            samples.push(Sample::new(field(cx)?, field(cy)?)?);
            if let (Some((a, b)), Some(clean)) = (clean_cols, clean.as_mut()) {
                clean.push(Sample::new(field(a)?, field(b)?)?);
            }
        }
        Ok(Dataset {
            samples,
            clean,
            meta,
        })
    }
}

/// Formats a real with 17 significant digits, which round-trips any `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
