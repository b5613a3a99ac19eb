//! Ordinal scales and target functions.
//!
//! A target function maps each class `k` of an ordinal scale to the vector a
//! model is trained to emit for it. Classes are 1-based everywhere in the
//! public interface.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default display labels for a five-level severity scale.
pub const SEVERITY_LABELS: [&str; 5] = ["None", "(+)", "+", "++", "+++"];

/// An ordered set of classes `1..=K` with display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScale")]
pub struct OrdinalScale {
    class_count: usize,
    labels: Vec<String>,
}

/// Serialized form; `labels` may be omitted to get the defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScale {
    class_count: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawScale> for OrdinalScale {
    type Error = Error;

    fn try_from(raw: RawScale) -> Result<Self> {
        let scale = match raw.labels {
            Some(labels) => Self {
                class_count: raw.class_count,
                labels,
            },
            None => Self::new(raw.class_count)?,
        };
        scale.validate()?;
        Ok(scale)
    }
}

impl OrdinalScale {
    /// A scale with default labels: the severity labels for `K = 5`,
    /// otherwise the class numbers.
    pub fn new(class_count: usize) -> Result<Self> {
        if class_count < 2 {
            return Err(Error::InvalidScale(format!(
                "need at least 2 classes, got {class_count}"
            )));
        }
        let labels = if class_count == SEVERITY_LABELS.len() {
            SEVERITY_LABELS.iter().map(|s| s.to_string()).collect()
        } else {
            (1..=class_count).map(|k| k.to_string()).collect()
        };
        Ok(Self {
            class_count,
            labels,
        })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let scale = Self {
            class_count: labels.len(),
            labels,
        };
        scale.validate()?;
        Ok(scale)
    }

    /// The five-level severity scale (None, (+), +, ++, +++).
    pub fn severity() -> Self {
        Self::new(SEVERITY_LABELS.len()).expect("five classes form a valid scale")
    }

    pub fn validate(&self) -> Result<()> {
        if self.class_count < 2 {
            return Err(Error::InvalidScale(format!(
                "need at least 2 classes, got {}",
                self.class_count
            )));
        }
        if self.labels.len() != self.class_count {
            return Err(Error::InvalidScale(format!(
                "{} labels for {} classes",
                self.labels.len(),
                self.class_count
            )));
        }
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, class: usize) -> Result<&str> {
        self.check_class(class)?;
        Ok(&self.labels[class - 1])
    }

    pub fn classes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.class_count
    }

    pub fn check_class(&self, class: usize) -> Result<()> {
        if class == 0 || class > self.class_count {
            return Err(Error::InvalidClass {
                class,
                class_count: self.class_count,
            });
        }
        Ok(())
    }
}

/// The six target-function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    OneHot,
    Gaussian,
    Continuous,
    ProgressBar,
    SoftProgressBar,
    BinaryNumber,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 6] = [
        EncodingKind::OneHot,
        EncodingKind::Gaussian,
        EncodingKind::ProgressBar,
        EncodingKind::SoftProgressBar,
        EncodingKind::Continuous,
        EncodingKind::BinaryNumber,
    ];

    /// Short name used in result tables.
    pub fn short_name(self) -> &'static str {
        match self {
            EncodingKind::OneHot => "One-Hot",
            EncodingKind::Gaussian => "Gauss",
            EncodingKind::Continuous => "Continuous",
            EncodingKind::ProgressBar => "Prog-Bar",
            EncodingKind::SoftProgressBar => "Soft-Prog-Bar",
            EncodingKind::BinaryNumber => "Bin-Num",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.short_name() == name)
    }

    /// Stable numeric id, used to derive per-encoding random streams.
    pub fn id(self) -> u64 {
        match self {
            EncodingKind::OneHot => 0,
            EncodingKind::Gaussian => 1,
            EncodingKind::Continuous => 2,
            EncodingKind::ProgressBar => 3,
            EncodingKind::SoftProgressBar => 4,
            EncodingKind::BinaryNumber => 5,
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

fn default_sigma_squared() -> f64 {
    1.0
}

/// A target function: its family plus the Gaussian variance (ignored by the
/// other families).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Encoding {
    pub kind: EncodingKind,
    #[serde(default = "default_sigma_squared")]
    pub sigma_squared: f64,
}

impl Encoding {
    pub fn new(kind: EncodingKind) -> Self {
        Self {
            kind,
            sigma_squared: default_sigma_squared(),
        }
    }

    pub fn gaussian(sigma_squared: f64) -> Result<Self> {
        let encoding = Self {
            kind: EncodingKind::Gaussian,
            sigma_squared,
        };
        encoding.validate()?;
        Ok(encoding)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_squared > 0.0 && self.sigma_squared.is_finite()) {
            return Err(Error::Config(format!(
                "sigma_squared must be positive and finite, got {}",
                self.sigma_squared
            )));
        }
        Ok(())
    }

    /// Length `d` of the target vectors for a scale with `class_count` classes.
    pub fn vector_length(&self, class_count: usize) -> Result<usize> {
        if class_count < 2 {
            return Err(Error::InvalidScale(format!(
                "need at least 2 classes, got {class_count}"
            )));
        }
        Ok(match self.kind {
            EncodingKind::OneHot | EncodingKind::Gaussian | EncodingKind::SoftProgressBar => {
                class_count
            }
            EncodingKind::Continuous => 1,
            EncodingKind::ProgressBar => class_count - 1,
            // bits needed for the largest class index
            EncodingKind::BinaryNumber => (usize::BITS - class_count.leading_zeros()) as usize,
        })
    }

    /// Target vector for `class` on `scale`.
    pub fn encode(&self, scale: &OrdinalScale, class: usize) -> Result<Vec<f64>> {
        scale.check_class(class)?;
        let big_k = scale.class_count();
        let d = self.vector_length(big_k)?;
        let k = class;
        let vector = match self.kind {
            EncodingKind::OneHot => (1..=d).map(|i| if i == k { 1.0 } else { 0.0 }).collect(),
            EncodingKind::Gaussian => {
                let s2 = self.sigma_squared;
                let norm = 1.0 / (2.0 * PI * s2).sqrt();
                (1..=d)
                    .map(|i| {
                        let diff = i as f64 - k as f64;
                        norm * (-(diff * diff) / (2.0 * s2)).exp()
                    })
                    .collect()
            }
            EncodingKind::Continuous => vec![(k - 1) as f64 / (big_k - 1) as f64],
            EncodingKind::ProgressBar => (1..=d).map(|i| if i < k { 1.0 } else { 0.0 }).collect(),
            EncodingKind::SoftProgressBar => (1..=d)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect(),
            // most significant bit first
            EncodingKind::BinaryNumber => (0..d).rev().map(|bit| ((k >> bit) & 1) as f64).collect(),
        };
        Ok(vector)
    }

    pub fn target_matrix(&self, scale: &OrdinalScale) -> Result<TargetMatrix> {
        self.validate()?;
        scale.validate()?;
        let rows = scale
            .classes()
            .map(|k| self.encode(scale, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(TargetMatrix {
            encoding: *self,
            rows,
        })
    }
}

impl From<EncodingKind> for Encoding {
    fn from(kind: EncodingKind) -> Self {
        Encoding::new(kind)
    }
}

/// All `K` target vectors of one encoding, row `k` holding the target of
/// class `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMatrix {
    encoding: Encoding,
    rows: Vec<Vec<f64>>,
}

impl TargetMatrix {
    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn class_count(&self) -> usize {
        self.rows.len()
    }

    /// Target vector length `d`.
    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Target of class `k` (1-based).
    pub fn row(&self, class: usize) -> &[f64] {
        &self.rows[class - 1]
    }

    /// `(class, target)` pairs in ascending class order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i + 1, r.as_slice()))
    }
}
