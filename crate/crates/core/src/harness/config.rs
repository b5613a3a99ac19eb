use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{is_compatible, ClassifierKind};
use crate::data::{default_findings, SynthConfig};
use crate::encoding::{Encoding, EncodingKind, OrdinalScale};
use crate::error::{Error, Result};
use crate::model::TrainConfig;

/// Hidden layout and initialization seed shared by every trained network.
/// Input and output widths follow from the data and the encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub hidden_dims: Vec<usize>,
    pub init_seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            hidden_dims: vec![64],
            init_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Synth(SynthConfig),
    /// JSON-Lines dataset; relative paths resolve against the config file.
    Path(PathBuf),
}

/// Full description of an encoding/classifier comparison.
///
/// `train.seed` is not used directly: every (encoding, fold) job derives
/// its shuffling seed from `run_seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scale: OrdinalScale,
    pub findings: Vec<String>,
    pub encodings: Vec<Encoding>,
    pub classifiers: Vec<ClassifierKind>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub train: TrainConfig,
    pub data: DataSource,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_folds")]
    pub n_folds: usize,
    #[serde(default)]
    pub split_seed: u64,
    #[serde(default)]
    pub run_seed: u64,
}

fn default_test_fraction() -> f64 {
    0.2
}

fn default_folds() -> usize {
    5
}

impl Default for ExperimentConfig {
    /// Every encoding and classifier on the default synthetic data, five
    /// severity classes and seven findings.
    fn default() -> Self {
        let synth = SynthConfig::default();
        Self {
            scale: OrdinalScale::severity(),
            findings: default_findings(synth.n_findings),
            encodings: EncodingKind::ALL.into_iter().map(Encoding::new).collect(),
            classifiers: ClassifierKind::ALL.to_vec(),
            model: ModelConfig::default(),
            train: TrainConfig::default(),
            data: DataSource::Synth(synth),
            test_fraction: default_test_fraction(),
            n_folds: default_folds(),
            split_seed: 0,
            run_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Read a config file, resolving a relative dataset path against the
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_json(&text)?;
        if let DataSource::Path(data) = &mut config.data {
            if data.is_relative() {
                if let Some(dir) = path.parent() {
                    *data = dir.join(&*data);
                }
            }
        }
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Short SHA-256 digest of the canonical JSON form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_vec(self).expect("config serializes"));
        hex::encode(&digest[..8])
    }

    pub fn validate(&self) -> Result<()> {
        self.scale.validate()?;
        if self.findings.is_empty() {
            return Err(Error::Config("at least one finding is required".into()));
        }
        if self.findings.iter().collect::<BTreeSet<_>>().len() != self.findings.len() {
            return Err(Error::Config("finding names must be unique".into()));
        }
        if self.encodings.is_empty() || self.classifiers.is_empty() {
            return Err(Error::Config(
                "at least one encoding and one classifier are required".into(),
            ));
        }
        for encoding in &self.encodings {
            encoding.validate()?;
        }
        let kinds: BTreeSet<_> = self.encodings.iter().map(|e| e.kind).collect();
        if kinds.len() != self.encodings.len() {
            return Err(Error::Config("each encoding kind may appear once".into()));
        }
        if self.classifiers.iter().collect::<BTreeSet<_>>().len() != self.classifiers.len() {
            return Err(Error::Config("each classifier may appear once".into()));
        }
        if self.method_pairs().next().is_none() {
            return Err(Error::Config(
                "no compatible (encoding, classifier) pair requested".into(),
            ));
        }
        if self.model.hidden_dims.contains(&0) {
            return Err(Error::Config("hidden layer widths must be positive".into()));
        }
        self.train.validate()?;
        if let DataSource::Synth(synth) = &self.data {
            synth.validate()?;
            if synth.n_findings != self.findings.len() {
                return Err(Error::Config(format!(
                    "synthetic data has {} findings but {} are named",
                    synth.n_findings,
                    self.findings.len()
                )));
            }
            if synth.class_count != self.scale.class_count() {
                return Err(Error::Config(format!(
                    "synthetic data has {} classes but the scale has {}",
                    synth.class_count,
                    self.scale.class_count()
                )));
            }
        }
        if !(0.0..1.0).contains(&self.test_fraction) {
            return Err(Error::Config("test_fraction must lie in [0, 1)".into()));
        }
        if self.n_folds < 2 {
            return Err(Error::Config("n_folds must be at least 2".into()));
        }
        Ok(())
    }

    /// Requested compatible pairs, in config order.
    pub fn method_pairs(&self) -> impl Iterator<Item = (Encoding, ClassifierKind)> + '_ {
        self.encodings.iter().flat_map(move |e| {
            self.classifiers
                .iter()
                .filter(move |c| is_compatible(e.kind, **c))
                .map(move |c| (*e, *c))
        })
    }
}
