//! Samples, datasets and patient-wise splits.

mod io;
mod split;
mod synth;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::encoding::OrdinalScale;
use crate::error::{Error, Result};

pub use io::{load, save, to_jsonl};
pub use split::{split, SplitPlan};
pub use synth::{default_findings, generate, generate_with_latents, SynthConfig};

/// One observation: a feature vector with a severity class per finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sample {
    pub patient_id: u64,
    pub features: Vec<f64>,
    pub labels: BTreeMap<String, usize>,
}

impl Sample {
    pub fn label(&self, finding: &str) -> Result<usize> {
        self.labels
            .get(finding)
            .copied()
            .ok_or_else(|| Error::MissingFinding(finding.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>) -> Self {
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Finding names of the first sample, sorted.
    pub fn findings(&self) -> Vec<String> {
        self.samples
            .first()
            .map(|s| s.labels.keys().cloned().collect())
            .unwrap_or_default()
    }

    pub fn feature_dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.features.len())
    }

    pub fn patient_ids(&self) -> BTreeSet<u64> {
        self.samples.iter().map(|s| s.patient_id).collect()
    }

    /// Samples whose patient is in `patients`, in dataset order.
    pub fn select(&self, patients: &BTreeSet<u64>) -> Vec<Sample> {
        self.samples
            .iter()
            .filter(|s| patients.contains(&s.patient_id))
            .cloned()
            .collect()
    }

    /// Replace the finding names, mapping them positionally onto the
    /// current (sorted) names.
    pub fn rename_findings(&mut self, names: &[String]) -> Result<()> {
        let current = self.findings();
        if !self.is_empty() && names.len() != current.len() {
            return Err(Error::Config(format!(
                "{} finding names for {} findings",
                names.len(),
                current.len()
            )));
        }
        for sample in &mut self.samples {
            let mut labels = BTreeMap::new();
            for (old, new) in current.iter().zip(names) {
                labels.insert(new.clone(), sample.label(old)?);
            }
            sample.labels = labels;
        }
        Ok(())
    }

    /// Check every sample against a finding list and scale. Line numbers in
    /// errors are 1-based sample positions.
    pub fn validate(&self, findings: &[String], scale: &OrdinalScale) -> Result<()> {
        let dim = self.feature_dim();
        for (index, sample) in self.samples.iter().enumerate() {
            let line = index + 1;
            if sample.features.len() != dim {
                return Err(Error::Schema {
                    line,
                    message: format!("{} features, expected {dim}", sample.features.len()),
                });
            }
            if let Some(v) = sample.features.iter().find(|v| !v.is_finite()) {
                return Err(Error::Schema {
                    line,
                    message: format!("non-finite feature {v}"),
                });
            }
            for finding in findings {
                let class = sample.labels.get(finding).ok_or_else(|| Error::Schema {
                    line,
                    message: format!("missing finding `{finding}`"),
                })?;
                scale.check_class(*class).map_err(|_| Error::Schema {
                    line,
                    message: format!(
                        "class {class} of `{finding}` outside 1..={}",
                        scale.class_count()
                    ),
                })?;
            }
        }
        Ok(())
    }
}
