use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mlp::{MlpConfig, ModelParams};
use super::train::TrainConfig;
use crate::encoding::{Encoding, OrdinalScale};
use crate::error::{Error, Result};

/// A trained network with everything needed to decode its outputs.
///
/// Stored as JSON; weights are row-major arrays and round-trip bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub mlp: MlpConfig,
    pub train: TrainConfig,
    pub encoding: Encoding,
    pub scale: OrdinalScale,
    pub findings: Vec<String>,
    pub params: ModelParams,
}

impl Checkpoint {
    pub fn validate(&self) -> Result<()> {
        self.scale.validate()?;
        self.encoding.validate()?;
        self.mlp.validate()?;
        let d = self.encoding.vector_length(self.scale.class_count())?;
        let expected = d * self.findings.len();
        if self.mlp.output_dim != expected || self.params.output_dim() != expected {
            return Err(Error::ShapeMismatch {
                what: "checkpoint output layer",
                expected,
                actual: self.params.output_dim(),
            });
        }
        if self.params.input_dim() != self.mlp.input_dim {
            return Err(Error::ShapeMismatch {
                what: "checkpoint input layer",
                expected: self.mlp.input_dim,
                actual: self.params.input_dim(),
            });
        }
        for layer in &self.params.layers {
            if layer.weights.len() != layer.inputs * layer.outputs
                || layer.bias.len() != layer.outputs
            {
                return Err(Error::ShapeMismatch {
                    what: "checkpoint layer",
                    expected: layer.inputs * layer.outputs,
                    actual: layer.weights.len(),
                });
            }
        }
        if !self.params.is_finite() {
            return Err(Error::NonFinite("checkpoint weights".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let checkpoint: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        checkpoint.validate()?;
        Ok(checkpoint)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
