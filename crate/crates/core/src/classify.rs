//! Classification functions mapping a model output back to a class.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::encoding::{EncodingKind, TargetMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    /// Index of the largest output entry.
    Argmax,
    /// Target with the smallest L1 distance.
    L1Nearest,
    /// Target with the largest cosine similarity.
    DotNearest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [
        ClassifierKind::Argmax,
        ClassifierKind::L1Nearest,
        ClassifierKind::DotNearest,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            ClassifierKind::Argmax => "Argmax",
            ClassifierKind::L1Nearest => "L1",
            ClassifierKind::DotNearest => "DP",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.short_name() == name)
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Whether `classifier` is a meaningful decoder for targets of `encoding`.
///
/// Argmax needs the class to sit at the peak of the target, which only holds
/// for one-hot and Gaussian targets. Cosine similarity cannot normalize a
/// scalar target or the all-zero progress-bar row.
pub fn is_compatible(encoding: EncodingKind, classifier: ClassifierKind) -> bool {
    match classifier {
        ClassifierKind::Argmax => {
            matches!(encoding, EncodingKind::OneHot | EncodingKind::Gaussian)
        }
        ClassifierKind::L1Nearest => true,
        ClassifierKind::DotNearest => !matches!(
            encoding,
            EncodingKind::Continuous | EncodingKind::ProgressBar
        ),
    }
}

/// Decode a model output `y` into a 1-based class. Ties go to the smallest
/// class.
pub fn classify(classifier: ClassifierKind, y: &[f64], targets: &TargetMatrix) -> Result<usize> {
    let encoding = targets.encoding().kind;
    if !is_compatible(encoding, classifier) {
        return Err(Error::Incompatible {
            encoding,
            classifier,
        });
    }
    if y.len() != targets.dim() {
        return Err(Error::ShapeMismatch {
            what: "model output",
            expected: targets.dim(),
            actual: y.len(),
        });
    }
    match classifier {
        ClassifierKind::Argmax => Ok(first_max(y.iter().copied()) + 1),
        ClassifierKind::L1Nearest => {
            let distances = targets
                .iter()
                .map(|(_, t)| -y.iter().zip(t).map(|(a, b)| (a - b).abs()).sum::<f64>());
            Ok(first_max(distances) + 1)
        }
        ClassifierKind::DotNearest => {
            let y_norm = norm2(y);
            if y_norm == 0.0 {
                return Err(Error::DegenerateOutput);
            }
            let similarities = targets.iter().map(|(_, t)| {
                let dot: f64 = y.iter().zip(t).map(|(a, b)| a * b).sum();
                dot / (y_norm * norm2(t))
            });
            Ok(first_max(similarities) + 1)
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Position of the first maximum. NaN never wins.
fn first_max(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}
